#ifndef KGV_BILINEAR_HPP
#define KGV_BILINEAR_HPP

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

// Numerical engine for the half-wave propagator e^{it sqrt(1-Delta)} and the
// bilinear space-time norm: validates the exact frequency-side identity
// against direct quadrature and evaluates the two weighted upper bounds.
// Fourier convention: fhat(xi) = integral f(x) e^{-i x xi} dx, inverse
// carries 1/(2 pi); all 2 pi factors are kept literal so the constants are
// validated end-to-end.

namespace kgv {

enum class ProfileKind { bump, arch, ramp, csv, zero };

// Sampled frequency-side data on a uniform grid with declared support.
struct FrequencyProfile {
  ProfileKind kind = ProfileKind::zero;
  double xi0 = 0.0;  // first grid point
  double dxi = 0.0;
  std::vector<std::complex<double>> values;
  double support_lo = 0.0;
  double support_hi = 0.0;
  double amplitude = 1.0;

  std::size_t size() const { return values.size(); }
  double xi(std::size_t k) const { return xi0 + static_cast<double>(k) * dxi; }
  // 0 outside the declared support; nearest sample inside
  std::complex<double> value_at(double xi) const;
  std::string describe() const;

  // C-infinity bump exp(-1/(1-tau^2)) mapped onto [a, b]; vanishes to all
  // orders at the support edges (spectrally accurate under the trapezoid rule)
  static FrequencyProfile bump(double a, double b, int samples = 512, double amplitude = 1.0);
  // parabolic arch 1 - tau^2; vanishes at the edges but keeps a slope there
  static FrequencyProfile arch(double a, double b, int samples = 512, double amplitude = 1.0);
  // affine ramp (3 + tau)/4; nonzero values and slope at the support edges,
  // so the squared integrand carries a genuine O(h^2) trapezoid term
  static FrequencyProfile ramp(double a, double b, int samples = 512, double amplitude = 1.0);
  // same shapes sampled exactly on the transform lattice xi = k pi / L
  static FrequencyProfile bump_on_lattice(double a, double b, double L, double amplitude = 1.0);
  static FrequencyProfile arch_on_lattice(double a, double b, double L, double amplitude = 1.0);
  static FrequencyProfile ramp_on_lattice(double a, double b, double L, double amplitude = 1.0);
  static FrequencyProfile zero_profile(double a, double b, int samples = 64);
  // CSV columns xi, re, im (optional header); grid must be uniform
  static FrequencyProfile from_csv(const std::filesystem::path& path);

  // same shape re-sampled with `factor` times as many points (analytic kinds only)
  FrequencyProfile refined(int factor) const;
};

// gap below which the 1/J weight is considered too close to the diagonal
inline constexpr double kMinSupportGap = 0.05;

// throws SupportsOverlap unless the declared supports are disjoint with a
// gap of at least kMinSupportGap; returns the gap
double require_disjoint(const FrequencyProfile& p1, const FrequencyProfile& p2);

struct SpaceTimeGrid {
  // defaults sized for the standard [1,2] x [3,4] pair, whose velocity gap
  // is only ~0.055: the window ladder reaches T = 512 before the 1%
  // increment criterion, and L keeps the boundary-band energy below 1e-6
  double L = 704.0;  // x window [-L, L]
  int nx = 32768;    // power of two
  double dt = 0.1;
  double t_initial = 32.0;  // first half-window T of the doubling ladder
  int max_doublings = 4;

  SpaceTimeGrid() = default;
  SpaceTimeGrid(double L_, int nx_, double dt_, double t_initial_, int max_doublings_);
  double dx() const { return 2.0 * L / nx; }
  double lattice_dxi() const;  // pi / L
};

// u(t, x_n) on the spatial lattice x_n = -L + n dx, via the exact frequency
// multiplier e^{it sqrt(1+xi^2)} and an FFT synthesis; trapezoid weights on
// the profile grid. Throws GridMismatch if the profile does not sit on the
// transform lattice.
std::vector<std::complex<double>> propagate(const FrequencyProfile& p, double t,
                                            const SpaceTimeGrid& grid);

struct SpaceTimeNorm {
  double value = 0.0;        // converged window integral
  double truncation = 0.0;   // last doubling increment
  double t_final = 0.0;      // final half-window T
  double alias_fraction = 0.0;  // max boundary-band energy fraction seen
};

// integral over [-T, T] x [-L, L] of |u1 u2|^2, with T doubled until the
// increment falls below rel_tol (NotConverged past max_doublings).
SpaceTimeNorm bilinear_norm_spacetime(const FrequencyProfile& p1, const FrequencyProfile& p2,
                                      const SpaceTimeGrid& grid, double rel_tol = 0.01,
                                      int workers = 1);

// frequency side of the exact identity: 4/(2pi)^2 * integral over
// {xi2 >= xi1} of |F|^2 / J with F the symmetrization of fhat1 fhat2
double bilinear_norm_frequency(const FrequencyProfile& p1, const FrequencyProfile& p2);

// the two weighted upper bounds: 1/(2pi)^2 * integral of |fhat1|^2 |fhat2|^2 * W
double bound_A(const FrequencyProfile& p1, const FrequencyProfile& p2);
double bound_1(const FrequencyProfile& p1, const FrequencyProfile& p2);

struct WeightComparison {
  struct Row {
    double xi1, xi2, wA, w1;
    int tighter;  // +1: bound_A tighter, -1: bound_1 tighter, 0: tie
  };
  std::vector<Row> rows;
  long count_A_tighter = 0;
  long count_1_tighter = 0;
  long count_tie = 0;
  long skipped_near_diagonal = 0;
  std::string to_csv() const;
};

// sign map of weight_A - weight_1 over a rectangle, diagonal band excluded
WeightComparison weight_comparison(double xi1_lo, double xi1_hi, double xi2_lo, double xi2_hi,
                                   int resolution);

struct OrderingReport {
  long samples = 0;
  long violations = 0;      // beyond the 1e-9 relative roundoff allowance
  double max_excess = 0.0;  // max (1/J) / min(wA, w1) observed
};

// checks 1/J <= min(weight_A, weight_1) at random off-diagonal points
OrderingReport verify_pointwise_weight_ordering(long samples, std::uint64_t seed);

struct BilinearReport {
  std::string profile1;
  std::string profile2;
  double spacetime = 0.0;
  double frequency = 0.0;
  double bound_A = 0.0;
  double bound_1 = 0.0;
  double truncation = 0.0;
  double identity_rel_err = 0.0;
  double alias_fraction = 0.0;
  double t_final = 0.0;
  double grid_L = 0.0;
  int grid_nx = 0;
  double grid_dt = 0.0;
  double dxi1 = 0.0;
  double dxi2 = 0.0;

  std::string to_json() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

// runs the full desk-scale validation for one profile pair
BilinearReport make_report(const FrequencyProfile& p1, const FrequencyProfile& p2,
                           const SpaceTimeGrid& grid, double rel_tol = 0.01, int workers = 1);

}  // namespace kgv

#endif  // KGV_BILINEAR_HPP
