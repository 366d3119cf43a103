#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "kgv/bilinear.hpp"
#include "kgv/kgfun.hpp"
#include "kgv/rng.hpp"
#include "oracle.hpp"

using namespace kgv;
using kgv_test::rel_close;

namespace {

double slice_l2(const std::vector<std::complex<double>>& u, double dx) {
  double s = 0.0;
  for (const auto& v : u) s += std::norm(v);
  return s * dx;
}

// direct trapezoid synthesis, the oracle for the FFT path
std::complex<double> direct_u(const FrequencyProfile& p, double t, double x) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < p.size(); ++k) {
    double w = (k == 0 || k + 1 == p.size()) ? 0.5 : 1.0;
    double xi = p.xi(k);
    double phase = x * xi + t * std::sqrt(1.0 + xi * xi);
    acc += w * p.values[k] * std::polar(1.0, phase);
  }
  return acc * (p.dxi / (2.0 * std::numbers::pi));
}

}  // namespace

TEST_CASE("profile construction and invariants") {
  FrequencyProfile p = FrequencyProfile::bump(1.0, 2.0, 256);
  CHECK(p.size() == 256);
  CHECK(p.values.front() == std::complex<double>(0.0, 0.0));  // vanishes at the edges
  CHECK(p.values.back() == std::complex<double>(0.0, 0.0));
  CHECK(std::abs(p.value_at(1.5)) > 0.0);
  CHECK(p.value_at(0.5) == std::complex<double>(0.0, 0.0));
  CHECK(p.value_at(2.5) == std::complex<double>(0.0, 0.0));
  CHECK_THROWS_AS(FrequencyProfile::bump(2.0, 1.0, 64), InvalidParameter);
  CHECK_THROWS_AS(FrequencyProfile::bump(0.0, 10.0, 16), InvalidParameter);  // < 8 pts/unit

  FrequencyProfile lat = FrequencyProfile::bump_on_lattice(1.0, 2.0, 96.0);
  double dxi = std::numbers::pi / 96.0;
  CHECK(rel_close(lat.dxi, dxi, 1e-15));
  CHECK(std::fabs(lat.xi0 / dxi - std::round(lat.xi0 / dxi)) < 1e-9);
}

TEST_CASE("space-time grid invariants") {
  CHECK_THROWS_AS(SpaceTimeGrid(96.0, 1000, 0.1, 8.0, 3), InvalidParameter);  // not a power of two
  CHECK_THROWS_AS(SpaceTimeGrid(-1.0, 1024, 0.1, 8.0, 3), InvalidParameter);
  CHECK_THROWS_AS(SpaceTimeGrid(96.0, 1024, 0.0, 8.0, 3), InvalidParameter);
}

TEST_CASE("support disjointness gate") {
  FrequencyProfile a = FrequencyProfile::bump(1.0, 2.0, 128);
  FrequencyProfile b = FrequencyProfile::bump(3.0, 4.0, 128);
  FrequencyProfile c = FrequencyProfile::bump(1.5, 2.5, 128);
  FrequencyProfile d = FrequencyProfile::bump(2.01, 3.0, 128);
  CHECK(require_disjoint(a, b) == doctest::Approx(1.0));
  CHECK_THROWS_AS(require_disjoint(a, c), SupportsOverlap);
  CHECK_THROWS_AS(require_disjoint(a, a), SupportsOverlap);
  CHECK_THROWS_AS(require_disjoint(a, d), SupportsOverlap);  // gap below the minimum
  CHECK_THROWS_AS(bilinear_norm_frequency(a, c), SupportsOverlap);
}

TEST_CASE("propagate matches the direct trapezoid synthesis") {
  SpaceTimeGrid grid(48.0, 1024, 0.1, 4.0, 3);
  FrequencyProfile p = FrequencyProfile::bump_on_lattice(1.0, 2.5, grid.L);
  Rng rng(41);
  for (double t : {0.0, 1.0, 3.7}) {
    auto u = propagate(p, t, grid);
    REQUIRE(u.size() == static_cast<std::size_t>(grid.nx));
    for (int probe = 0; probe < 40; ++probe) {
      int n = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(grid.nx));
      double x = -grid.L + n * grid.dx();
      std::complex<double> want = direct_u(p, t, x);
      CHECK(std::abs(u[static_cast<std::size_t>(n)] - want) <= 1e-10 * (1.0 + std::abs(want)));
    }
  }
}

TEST_CASE("t = 0 propagation is the plain inverse transform") {
  SpaceTimeGrid grid(48.0, 1024, 0.1, 4.0, 3);
  FrequencyProfile p = FrequencyProfile::bump_on_lattice(1.0, 2.0, grid.L);
  auto u0 = propagate(p, 0.0, grid);
  for (int n = 0; n < grid.nx; n += 37) {
    double x = -grid.L + n * grid.dx();
    std::complex<double> want = direct_u(p, 0.0, x);
    CHECK(std::abs(u0[static_cast<std::size_t>(n)] - want) <= 1e-10 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("unitarity: the slice L2 norm is constant in time") {
  SpaceTimeGrid grid(64.0, 2048, 0.1, 4.0, 3);
  FrequencyProfile p = FrequencyProfile::bump_on_lattice(1.0, 2.0, grid.L);
  double n0 = slice_l2(propagate(p, 0.0, grid), grid.dx());
  REQUIRE(n0 > 0.0);
  for (double t : {1.0, 5.0}) {
    double nt = slice_l2(propagate(p, t, grid), grid.dx());
    CHECK(rel_close(nt, n0, 1e-6));
  }
}

TEST_CASE("a narrow packet moves at the group velocity") {
  SpaceTimeGrid grid(96.0, 4096, 0.1, 4.0, 3);
  FrequencyProfile p = FrequencyProfile::bump_on_lattice(2.8, 3.2, grid.L);
  auto peak_at = [&](double t) {
    auto u = propagate(p, t, grid);
    std::size_t best = 0;
    for (std::size_t n = 1; n < u.size(); ++n)
      if (std::norm(u[n]) > std::norm(u[best])) best = n;
    return -grid.L + static_cast<double>(best) * grid.dx();
  };
  // the e^{+it sqrt(1+xi^2)} multiplier carries packets toward -x, so the
  // stationary-phase speed |x/t| is xi0/sqrt(1+xi0^2)
  double drift = (peak_at(10.0) - peak_at(0.0)) / 10.0;
  CHECK(drift < 0.0);
  CHECK(std::fabs(std::fabs(drift) - 0.94868329805051380) <= 0.02);
}

TEST_CASE("grid mismatch is rejected") {
  SpaceTimeGrid grid(48.0, 1024, 0.1, 4.0, 3);
  FrequencyProfile off = FrequencyProfile::bump(1.0, 2.0, 200);  // not on the lattice
  CHECK_THROWS_AS(propagate(off, 0.0, grid), GridMismatch);
  FrequencyProfile beyond = FrequencyProfile::bump_on_lattice(40.0, 80.0, grid.L);
  CHECK_THROWS_AS(propagate(beyond, 0.0, grid), GridMismatch);  // past Nyquist
}

TEST_CASE("zero factor gives a zero bilinear norm") {
  SpaceTimeGrid grid(48.0, 1024, 0.1, 2.0, 2);
  FrequencyProfile p1 = FrequencyProfile::bump_on_lattice(1.0, 2.0, grid.L);
  FrequencyProfile p2 = FrequencyProfile::zero_profile(3.0, 4.0);
  // place the zero profile on the lattice
  FrequencyProfile z = FrequencyProfile::bump_on_lattice(3.0, 4.0, grid.L, 0.0);
  SpaceTimeNorm st = bilinear_norm_spacetime(p1, z, grid, 0.01, 2);
  CHECK(st.value == 0.0);
  CHECK(p2.size() > 0);
}

TEST_CASE("exact identity: space-time norm equals the frequency-side integral") {
  // opposite-sign supports fly apart at relative speed > 1.4, so the window
  // ladder converges by T = 32
  SpaceTimeGrid grid(128.0, 8192, 0.1, 8.0, 3);
  FrequencyProfile p1 = FrequencyProfile::bump_on_lattice(-2.0, -1.0, grid.L);
  FrequencyProfile p2 = FrequencyProfile::bump_on_lattice(1.0, 2.0, grid.L);
  double freq = bilinear_norm_frequency(p1, p2);
  REQUIRE(freq > 0.0);
  SpaceTimeNorm st = bilinear_norm_spacetime(p1, p2, grid, 0.01, 4);
  CHECK(st.alias_fraction < 1e-6);
  CHECK(std::fabs(st.value - freq) / freq <= 0.05);
  // doubling from the converged window moved the value by < 1%
  CHECK(st.truncation <= 0.01 * st.value);
}

TEST_CASE("time-step refinement stability") {
  SpaceTimeGrid coarse(128.0, 8192, 0.1, 8.0, 3);
  SpaceTimeGrid fine(128.0, 8192, 0.05, 8.0, 3);
  FrequencyProfile p1 = FrequencyProfile::bump_on_lattice(-2.0, -1.0, coarse.L);
  FrequencyProfile p2 = FrequencyProfile::bump_on_lattice(1.0, 2.0, coarse.L);
  double v_coarse = bilinear_norm_spacetime(p1, p2, coarse, 0.01, 4).value;
  double v_fine = bilinear_norm_spacetime(p1, p2, fine, 0.01, 4).value;
  CHECK(std::fabs(v_coarse - v_fine) / v_fine < 2e-3);
}

TEST_CASE("frequency-side symmetry and homogeneity") {
  FrequencyProfile p1 = FrequencyProfile::bump(1.0, 2.0, 300);
  FrequencyProfile p2 = FrequencyProfile::bump(3.0, 4.0, 300);
  double v12 = bilinear_norm_frequency(p1, p2);
  double v21 = bilinear_norm_frequency(p2, p1);
  CHECK(rel_close(v12, v21, 1e-12));

  FrequencyProfile scaled = FrequencyProfile::bump(1.0, 2.0, 300, 2.0);
  CHECK(rel_close(bilinear_norm_frequency(scaled, p2), 4.0 * v12, 1e-12));
  CHECK(rel_close(bound_A(scaled, p2), 4.0 * bound_A(p1, p2), 1e-12));
  CHECK(rel_close(bound_1(scaled, p2), 4.0 * bound_1(p1, p2), 1e-12));
}

TEST_CASE("grid refinement stability for smooth bumps") {
  FrequencyProfile p1 = FrequencyProfile::bump(1.0, 2.0, 256);
  FrequencyProfile p2 = FrequencyProfile::bump(3.0, 4.0, 256);
  double v1 = bilinear_norm_frequency(p1, p2);
  double v2 = bilinear_norm_frequency(p1.refined(2), p2.refined(2));
  CHECK(std::fabs(v1 - v2) / v2 < 1e-3);
  double a1 = bound_A(p1, p2), a2 = bound_A(p1.refined(2), p2.refined(2));
  CHECK(std::fabs(a1 - a2) / a2 < 1e-3);
}

TEST_CASE("trapezoid order: Richardson slope near 2 on ramp profiles") {
  // ramps keep nonzero squared-value slope at the support edges, the generic
  // case for the trapezoid rule's h^2 Euler-Maclaurin term
  FrequencyProfile p1 = FrequencyProfile::ramp(1.0, 2.0, 64);
  FrequencyProfile p2 = FrequencyProfile::ramp(3.0, 4.0, 64);
  double v1 = bilinear_norm_frequency(p1, p2);
  double v2 = bilinear_norm_frequency(p1.refined(2), p2.refined(2));
  double v4 = bilinear_norm_frequency(p1.refined(4), p2.refined(4));
  double slope = std::log2(std::fabs(v1 - v2) / std::fabs(v2 - v4));
  CHECK(slope >= 1.8);
  CHECK(slope <= 2.2);
}

TEST_CASE("both weighted bounds dominate the frequency value on random pairs") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    double a1 = rng.uniform(-4.0, 2.0);
    double b1 = a1 + rng.uniform(0.4, 1.5);
    double a2 = b1 + rng.uniform(0.6, 3.0);
    double b2 = a2 + rng.uniform(0.4, 1.5);
    double amp1 = rng.uniform(0.5, 2.0), amp2 = rng.uniform(0.5, 2.0);
    FrequencyProfile p1 = rng.uniform() < 0.5 ? FrequencyProfile::bump(a1, b1, 220, amp1)
                                              : FrequencyProfile::arch(a1, b1, 220, amp1);
    FrequencyProfile p2 = rng.uniform() < 0.5 ? FrequencyProfile::bump(a2, b2, 220, amp2)
                                              : FrequencyProfile::arch(a2, b2, 220, amp2);
    double freq = bilinear_norm_frequency(p1, p2);
    CHECK(freq > 0.0);
    CHECK(freq <= bound_A(p1, p2));
    CHECK(freq <= bound_1(p1, p2));
  }
}

TEST_CASE("weight comparison map examples and symmetry") {
  // at (0, 1) the power weight is tighter; at (-1, 1) the angular one is
  CHECK(weight_A(0.0, 1.0) < weight_1(0.0, 1.0));
  CHECK(weight_1(-1.0, 1.0) < weight_A(-1.0, 1.0));
  CHECK(rel_close(weight_A(-1.0, 1.0), std::sqrt(2.0), 1e-13));
  CHECK(rel_close(weight_1(-1.0, 1.0), 1.0, 1e-13));

  WeightComparison map = weight_comparison(-2.0, 2.0, -2.0, 2.0, 40);
  CHECK(map.count_A_tighter > 0);
  CHECK(map.count_1_tighter > 0);
  CHECK(map.skipped_near_diagonal > 0);
  // symmetric region: the map is symmetric under (xi1, xi2) swap
  for (const auto& r : map.rows) {
    double wa_swapped = weight_A(r.xi2, r.xi1);
    double w1_swapped = weight_1(r.xi2, r.xi1);
    CHECK(rel_close(wa_swapped, r.wA, 1e-12));
    CHECK(rel_close(w1_swapped, r.w1, 1e-12));
  }
  std::string csv = map.to_csv();
  CHECK(csv.rfind("xi1,xi2,weight_A,weight_1,tighter\n", 0) == 0);
}

TEST_CASE("pointwise ordering 1/J <= min(weight_A, weight_1)") {
  OrderingReport r = verify_pointwise_weight_ordering(1'000'000, 0x0cea);
  CHECK(r.samples == 1'000'000);
  CHECK(r.violations == 0);
  CHECK(r.max_excess <= 1.0 + 1e-9);
  // far-field spot check from the operation contract
  double inv_j = 1.0 / jacobian_stable(0.0, 1e6);
  CHECK(inv_j <= weight_A(0.0, 1e6));
  CHECK(inv_j <= weight_1(0.0, 1e6));
  CHECK(inv_j >= 0.99);  // 1/J ~ 1 there
}

TEST_CASE("space-time convergence failure is reported honestly") {
  SpaceTimeGrid grid(48.0, 1024, 0.1, 1.0, 0);
  FrequencyProfile p1 = FrequencyProfile::bump_on_lattice(1.0, 2.0, grid.L);
  FrequencyProfile p2 = FrequencyProfile::bump_on_lattice(3.0, 4.0, grid.L);
  CHECK_THROWS_AS(bilinear_norm_spacetime(p1, p2, grid, 1e-9, 1), NotConverged);
}

TEST_CASE("CSV profile round-trip") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "kgv_bilinear_tests";
  fs::create_directories(dir);
  fs::path path = dir / "profile.csv";
  FrequencyProfile src = FrequencyProfile::bump(1.0, 2.0, 128);
  {
    std::ofstream out(path);
    out << std::setprecision(17);
    out << "xi,re,im\n";
    for (std::size_t k = 0; k < src.size(); ++k)
      out << src.xi(k) << ',' << src.values[k].real() << ',' << src.values[k].imag() << "\n";
  }
  FrequencyProfile loaded = FrequencyProfile::from_csv(path);
  REQUIRE(loaded.size() == src.size());
  CHECK(loaded.support_lo == doctest::Approx(1.0));
  CHECK(loaded.support_hi == doctest::Approx(2.0));
  for (std::size_t k = 0; k < src.size(); k += 7)
    CHECK(std::abs(loaded.values[k] - src.values[k]) <= 1e-6 * (1.0 + std::abs(src.values[k])));
  // loaded profiles drive the frequency-side quadratures like any other
  FrequencyProfile p2 = FrequencyProfile::bump(3.0, 4.0, 128);
  double v_loaded = bilinear_norm_frequency(loaded, p2);
  double v_src = bilinear_norm_frequency(src, p2);
  CHECK(rel_close(v_loaded, v_src, 1e-5));
  CHECK_THROWS_AS(loaded.refined(2), InvalidParameter);
}

TEST_CASE("report assembly") {
  SpaceTimeGrid grid(128.0, 8192, 0.1, 8.0, 3);
  FrequencyProfile p1 = FrequencyProfile::bump_on_lattice(-2.0, -1.0, grid.L);
  FrequencyProfile p2 = FrequencyProfile::bump_on_lattice(1.0, 2.0, grid.L);
  BilinearReport rep = make_report(p1, p2, grid, 0.01, 4);
  CHECK(rep.frequency > 0.0);
  CHECK(rep.frequency <= rep.bound_A);
  CHECK(rep.frequency <= rep.bound_1);
  CHECK(rep.identity_rel_err <= 0.05);
  std::string json = rep.to_json();
  CHECK(json.find("\"spacetime\"") != std::string::npos);
  std::string row = rep.to_csv_row();
  CHECK(std::count(row.begin(), row.end(), ',') >= 9);
}
