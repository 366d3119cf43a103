#include "kgv/bilinear.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "kgv/errors.hpp"
#include "kgv/kgfun.hpp"
#include "kgv/parallel.hpp"
#include "kgv/rng.hpp"

namespace kgv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double bump_shape(double tau) {
  if (std::fabs(tau) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - tau * tau));
}

double arch_shape(double tau) {
  if (std::fabs(tau) >= 1.0) return 0.0;
  return 1.0 - tau * tau;
}

double ramp_shape(double tau) {
  if (std::fabs(tau) > 1.0) return 0.0;
  return 0.25 * (3.0 + tau);
}

double shape_value(ProfileKind kind, double xi, double a, double b) {
  double tau = (2.0 * xi - (a + b)) / (b - a);
  switch (kind) {
    case ProfileKind::bump: return bump_shape(tau);
    case ProfileKind::arch: return arch_shape(tau);
    case ProfileKind::ramp: return ramp_shape(tau);
    default: return 0.0;
  }
}

FrequencyProfile sampled(ProfileKind kind, double a, double b, int samples, double amplitude) {
  if (!(b > a)) throw InvalidParameter("profile support needs b > a");
  if (samples < 2) throw InvalidParameter("profile needs at least two samples");
  double span = b - a;
  if ((samples - 1) / span < 8.0) throw InvalidParameter("grid must cover the support with >= 8 points per unit");
  FrequencyProfile p;
  p.kind = kind;
  p.support_lo = a;
  p.support_hi = b;
  p.amplitude = amplitude;
  p.dxi = span / (samples - 1);
  p.xi0 = a;
  p.values.resize(samples);
  for (int k = 0; k < samples; ++k)
    p.values[k] = amplitude * shape_value(kind, p.xi(k), a, b);
  return p;
}

FrequencyProfile sampled_on_lattice(ProfileKind kind, double a, double b, double L,
                                    double amplitude) {
  if (!(b > a)) throw InvalidParameter("profile support needs b > a");
  if (!(L > 0.0)) throw InvalidParameter("lattice needs L > 0");
  double dxi = std::numbers::pi / L;
  long k_lo = static_cast<long>(std::ceil(a / dxi));
  long k_hi = static_cast<long>(std::floor(b / dxi));
  if (k_hi - k_lo + 1 < 2 || (k_hi - k_lo) * dxi < 0.5 * (b - a))
    throw GridMismatch("lattice too coarse for the requested support");
  if ((k_hi - k_lo + 1) / (b - a) < 8.0)
    throw InvalidParameter("lattice must cover the support with >= 8 points per unit");
  FrequencyProfile p;
  p.kind = kind;
  p.support_lo = a;
  p.support_hi = b;
  p.amplitude = amplitude;
  p.dxi = dxi;
  p.xi0 = k_lo * dxi;
  p.values.resize(k_hi - k_lo + 1);
  for (std::size_t k = 0; k < p.values.size(); ++k)
    p.values[k] = amplitude * shape_value(kind, p.xi(k), a, b);
  return p;
}

}  // namespace

std::complex<double> FrequencyProfile::value_at(double x) const {
  if (x < support_lo || x > support_hi || values.empty()) return {0.0, 0.0};
  long k = std::lround((x - xi0) / dxi);
  k = std::clamp<long>(k, 0, static_cast<long>(values.size()) - 1);
  return values[static_cast<std::size_t>(k)];
}

std::string FrequencyProfile::describe() const {
  std::ostringstream out;
  switch (kind) {
    case ProfileKind::bump: out << "bump"; break;
    case ProfileKind::arch: out << "arch"; break;
    case ProfileKind::ramp: out << "ramp"; break;
    case ProfileKind::csv: out << "csv"; break;
    case ProfileKind::zero: out << "zero"; break;
  }
  out << "[" << fmt(support_lo) << "," << fmt(support_hi) << "] n=" << values.size()
      << " amp=" << fmt(amplitude);
  return out.str();
}

FrequencyProfile FrequencyProfile::bump(double a, double b, int samples, double amplitude) {
  return sampled(ProfileKind::bump, a, b, samples, amplitude);
}

FrequencyProfile FrequencyProfile::arch(double a, double b, int samples, double amplitude) {
  return sampled(ProfileKind::arch, a, b, samples, amplitude);
}

FrequencyProfile FrequencyProfile::ramp(double a, double b, int samples, double amplitude) {
  return sampled(ProfileKind::ramp, a, b, samples, amplitude);
}

FrequencyProfile FrequencyProfile::bump_on_lattice(double a, double b, double L, double amplitude) {
  return sampled_on_lattice(ProfileKind::bump, a, b, L, amplitude);
}

FrequencyProfile FrequencyProfile::arch_on_lattice(double a, double b, double L, double amplitude) {
  return sampled_on_lattice(ProfileKind::arch, a, b, L, amplitude);
}

FrequencyProfile FrequencyProfile::ramp_on_lattice(double a, double b, double L, double amplitude) {
  return sampled_on_lattice(ProfileKind::ramp, a, b, L, amplitude);
}

FrequencyProfile FrequencyProfile::zero_profile(double a, double b, int samples) {
  FrequencyProfile p = sampled(ProfileKind::bump, a, b, std::max(samples, 2 + 8 * int(b - a + 1)), 0.0);
  p.kind = ProfileKind::zero;
  for (auto& v : p.values) v = 0.0;
  return p;
}

FrequencyProfile FrequencyProfile::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open profile CSV: " + path.string());
  FrequencyProfile p;
  p.kind = ProfileKind::csv;
  std::string line;
  std::vector<double> xs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, re, im;
    if (!(row >> x >> re >> im)) {
      if (xs.empty()) continue;  // tolerate a header line
      throw Error("malformed profile CSV row: " + line);
    }
    xs.push_back(x);
    p.values.emplace_back(re, im);
  }
  if (xs.size() < 2) throw Error("profile CSV needs at least two rows");
  p.xi0 = xs.front();
  p.dxi = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  if (!(p.dxi > 0.0)) throw Error("profile CSV grid must be increasing");
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (std::fabs(xs[k] - p.xi(k)) > 1e-9 * p.dxi)
      throw Error("profile CSV grid must be uniform");
  p.support_lo = xs.front();
  p.support_hi = xs.back();
  return p;
}

FrequencyProfile FrequencyProfile::refined(int factor) const {
  if (factor < 1) throw InvalidParameter("refinement factor must be >= 1");
  if (kind != ProfileKind::bump && kind != ProfileKind::arch && kind != ProfileKind::ramp)
    throw InvalidParameter("only analytic profile kinds can be re-sampled");
  int n = static_cast<int>((values.size() - 1) * factor + 1);
  return sampled(kind, support_lo, support_hi, n, amplitude);
}

double require_disjoint(const FrequencyProfile& p1, const FrequencyProfile& p2) {
  double lo = std::max(p1.support_lo, p2.support_lo);
  double hi = std::min(p1.support_hi, p2.support_hi);
  if (lo <= hi) throw SupportsOverlap();
  double gap = p1.support_lo > p2.support_hi ? p1.support_lo - p2.support_hi
                                             : p2.support_lo - p1.support_hi;
  if (gap < kMinSupportGap)
    throw SupportsOverlap("support gap " + fmt(gap) + " below the minimum " + fmt(kMinSupportGap));
  return gap;
}

SpaceTimeGrid::SpaceTimeGrid(double L_, int nx_, double dt_, double t_initial_, int max_doublings_)
    : L(L_), nx(nx_), dt(dt_), t_initial(t_initial_), max_doublings(max_doublings_) {
  if (!(L > 0.0) || nx < 2 || (nx & (nx - 1)) != 0)
    throw InvalidParameter("spatial grid needs L > 0 and nx a power of two");
  if (!(dt > 0.0) || !(t_initial > 0.0) || max_doublings < 0)
    throw InvalidParameter("time grid needs dt > 0, t_initial > 0");
}

double SpaceTimeGrid::lattice_dxi() const { return std::numbers::pi / L; }

namespace {

// FFTW synthesis plan for one lattice size; FFTW_ESTIMATE for run-to-run
// determinism, FFTW_UNALIGNED so the thread-local caller buffers need no
// special allocator. Plan creation is serialized; execution is thread-safe.
class FftSynthesis {
 public:
  explicit FftSynthesis(int n) : n_(n) {
    static std::mutex plan_mutex;
    std::lock_guard<std::mutex> lock(plan_mutex);
    std::vector<std::complex<double>> probe(n);
    auto* raw = reinterpret_cast<fftw_complex*>(probe.data());
    plan_ = fftw_plan_dft_1d(n, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~FftSynthesis() {
    static std::mutex plan_mutex;
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(plan_);
  }
  FftSynthesis(const FftSynthesis&) = delete;
  FftSynthesis& operator=(const FftSynthesis&) = delete;

  void backward_inplace(std::vector<std::complex<double>>& buf) const {
    auto* raw = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plan_, raw, raw);
  }

 private:
  int n_;
  fftw_plan plan_;
};

struct LatticeEmbedding {
  long m_lo = 0;                  // lattice index of the first profile sample
  std::vector<double> phase;      // sqrt(1 + xi_k^2) per profile sample
};

LatticeEmbedding embed(const FrequencyProfile& p, const SpaceTimeGrid& grid) {
  double dxi = grid.lattice_dxi();
  if (p.values.empty() || !(p.dxi > 0.0)) throw GridMismatch("empty profile");
  if (std::fabs(p.dxi / dxi - 1.0) > 1e-9)
    throw GridMismatch("profile spacing " + fmt(p.dxi) + " is not the lattice spacing " + fmt(dxi));
  double m0 = p.xi0 / dxi;
  long m_lo = std::lround(m0);
  if (std::fabs(m0 - static_cast<double>(m_lo)) > 1e-6)
    throw GridMismatch("profile offset is not aligned with the lattice");
  long m_hi = m_lo + static_cast<long>(p.values.size()) - 1;
  if (m_lo < -grid.nx / 2 || m_hi >= grid.nx / 2)
    throw GridMismatch("profile exceeds the lattice Nyquist range");
  LatticeEmbedding e;
  e.m_lo = m_lo;
  e.phase.resize(p.values.size());
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    double xi = p.xi(k);
    e.phase[k] = std::sqrt(1.0 + xi * xi);
  }
  return e;
}

// spectrum -> physical slice: u(t, x_n) = (dxi / 2pi) sum_m c_m e^{i x_n xi_m}
void synthesize(const FrequencyProfile& p, const LatticeEmbedding& e, double t,
                const SpaceTimeGrid& grid, const FftSynthesis& fft,
                std::vector<std::complex<double>>& out) {
  out.assign(grid.nx, {0.0, 0.0});
  const std::size_t n = p.values.size();
  for (std::size_t k = 0; k < n; ++k) {
    double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;  // trapezoid on the profile grid
    std::complex<double> c = p.values[k] * std::polar(w, t * e.phase[k]);
    long m = e.m_lo + static_cast<long>(k);
    if (m & 1) c = -c;  // e^{-i L xi_m} = (-1)^m translates the origin to x = -L
    long idx = m >= 0 ? m : m + grid.nx;
    out[static_cast<std::size_t>(idx)] = c;
  }
  fft.backward_inplace(out);
  const double scale = grid.lattice_dxi() / kTwoPi;
  for (auto& v : out) v *= scale;
}

}  // namespace

std::vector<std::complex<double>> propagate(const FrequencyProfile& p, double t,
                                            const SpaceTimeGrid& grid) {
  FftSynthesis fft(grid.nx);
  LatticeEmbedding e = embed(p, grid);
  std::vector<std::complex<double>> out;
  synthesize(p, e, t, grid, fft, out);
  return out;
}

SpaceTimeNorm bilinear_norm_spacetime(const FrequencyProfile& p1, const FrequencyProfile& p2,
                                      const SpaceTimeGrid& grid, double rel_tol, int workers) {
  FftSynthesis fft(grid.nx);
  LatticeEmbedding e1 = embed(p1, grid);
  LatticeEmbedding e2 = embed(p2, grid);

  const double dx = grid.dx();
  const int band = std::max(1, grid.nx / 20);

  struct Slice {
    double norm = 0.0;
    double alias = 0.0;
  };
  // slice cache keyed by the signed step index j (t = j * dt); reused as the
  // window doubles so every slice is computed exactly once
  std::map<long, Slice> cache;

  auto compute_slices = [&](const std::vector<long>& js) {
    std::vector<Slice> fresh(js.size());
    parallel_for(js.size(), workers, [&](std::size_t i) {
      double t = static_cast<double>(js[i]) * grid.dt;
      std::vector<std::complex<double>> u1, u2;
      synthesize(p1, e1, t, grid, fft, u1);
      synthesize(p2, e2, t, grid, fft, u2);
      double total = 0.0, edge = 0.0, product = 0.0;
      for (int n = 0; n < grid.nx; ++n) {
        double a1 = std::norm(u1[static_cast<std::size_t>(n)]);
        double a2 = std::norm(u2[static_cast<std::size_t>(n)]);
        product += a1 * a2;
        total += a1 + a2;
        if (n < band || n >= grid.nx - band) edge += a1 + a2;
      }
      fresh[i].norm = product * dx;
      fresh[i].alias = total > 0.0 ? edge / total : 0.0;
    });
    for (std::size_t i = 0; i < js.size(); ++i) cache[js[i]] = fresh[i];
  };

  auto window_integral = [&](long n_half) {
    // trapezoid in t over j = -n_half .. n_half, fixed ordered summation
    double sum = 0.0;
    for (long j = -n_half; j <= n_half; ++j) {
      double w = (j == -n_half || j == n_half) ? 0.5 : 1.0;
      sum += w * cache.at(j).norm;
    }
    return sum * grid.dt;
  };

  long n_half = std::max<long>(1, std::lround(grid.t_initial / grid.dt));
  std::vector<long> first;
  for (long j = -n_half; j <= n_half; ++j) first.push_back(j);
  compute_slices(first);
  double prev = window_integral(n_half);

  SpaceTimeNorm result;
  for (int d = 0; d < grid.max_doublings; ++d) {
    long next_half = n_half * 2;
    std::vector<long> todo;
    for (long j = n_half + 1; j <= next_half; ++j) {
      todo.push_back(j);
      todo.push_back(-j);
    }
    compute_slices(todo);
    double cur = window_integral(next_half);
    double increment = cur - prev;
    result.value = cur;
    result.truncation = increment;
    result.t_final = static_cast<double>(next_half) * grid.dt;
    for (const auto& [j, s] : cache) result.alias_fraction = std::max(result.alias_fraction, s.alias);
    if (increment <= rel_tol * cur || cur == 0.0) return result;
    prev = cur;
    n_half = next_half;
  }
  throw NotConverged("window increments stayed above " + fmt(rel_tol) + " after " +
                     std::to_string(grid.max_doublings) + " doublings");
}

namespace {

// trapezoid weight on a profile's own grid
inline double trap_w(std::size_t k, std::size_t n) { return (k == 0 || k == n - 1) ? 0.5 : 1.0; }

}  // namespace

double bilinear_norm_frequency(const FrequencyProfile& p1, const FrequencyProfile& p2) {
  require_disjoint(p1, p2);
  // with disjoint supports exactly one of the two product rectangles sits in
  // {xi2 >= xi1}; integrate over it with the symmetrized F evaluated literally
  const FrequencyProfile& low = p1.support_hi < p2.support_lo ? p1 : p2;
  const FrequencyProfile& high = p1.support_hi < p2.support_lo ? p2 : p1;

  const std::size_t n1 = low.size(), n2 = high.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n1; ++i) {
    double xi_a = low.xi(i);
    double wi = trap_w(i, n1);
    double row = 0.0;
    for (std::size_t j = 0; j < n2; ++j) {
      double xi_b = high.xi(j);
      std::complex<double> F = 0.5 * (p1.value_at(xi_a) * p2.value_at(xi_b) +
                                      p1.value_at(xi_b) * p2.value_at(xi_a));
      double f2 = std::norm(F);
      if (f2 == 0.0) continue;
      row += trap_w(j, n2) * f2 / jacobian_stable(xi_a, xi_b);
    }
    sum += wi * row;
  }
  return 4.0 / (kTwoPi * kTwoPi) * sum * low.dxi * high.dxi;
}

namespace {

template <typename WeightFn>
double weighted_bound(const FrequencyProfile& p1, const FrequencyProfile& p2, WeightFn weight) {
  require_disjoint(p1, p2);
  const std::size_t n1 = p1.size(), n2 = p2.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n1; ++i) {
    double a1 = std::norm(p1.values[i]);
    if (a1 == 0.0) continue;
    double xi_a = p1.xi(i);
    double wi = trap_w(i, n1);
    double row = 0.0;
    for (std::size_t j = 0; j < n2; ++j) {
      double a2 = std::norm(p2.values[j]);
      if (a2 == 0.0) continue;
      row += trap_w(j, n2) * a2 * weight(xi_a, p2.xi(j));
    }
    sum += wi * a1 * row;
  }
  return sum * p1.dxi * p2.dxi / (kTwoPi * kTwoPi);
}

}  // namespace

double bound_A(const FrequencyProfile& p1, const FrequencyProfile& p2) {
  return weighted_bound(p1, p2, [](double a, double b) { return weight_A(a, b); });
}

double bound_1(const FrequencyProfile& p1, const FrequencyProfile& p2) {
  return weighted_bound(p1, p2, [](double a, double b) { return weight_1(a, b); });
}

WeightComparison weight_comparison(double xi1_lo, double xi1_hi, double xi2_lo, double xi2_hi,
                                   int resolution) {
  if (resolution < 1) throw InvalidParameter("resolution must be >= 1");
  WeightComparison out;
  double d1 = (xi1_hi - xi1_lo) / resolution;
  double d2 = (xi2_hi - xi2_lo) / resolution;
  for (int i = 0; i < resolution; ++i) {
    double x1 = xi1_lo + (i + 0.5) * d1;
    for (int j = 0; j < resolution; ++j) {
      double x2 = xi2_lo + (j + 0.5) * d2;
      if (std::fabs(x2 - x1) < kMinSupportGap) {
        ++out.skipped_near_diagonal;
        continue;
      }
      double wa = weight_A(x1, x2);
      double w1 = weight_1(x1, x2);
      int tighter = wa < w1 ? +1 : (w1 < wa ? -1 : 0);
      if (tighter > 0)
        ++out.count_A_tighter;
      else if (tighter < 0)
        ++out.count_1_tighter;
      else
        ++out.count_tie;
      out.rows.push_back({x1, x2, wa, w1, tighter});
    }
  }
  return out;
}

std::string WeightComparison::to_csv() const {
  std::ostringstream out;
  out << "xi1,xi2,weight_A,weight_1,tighter\n";
  for (const auto& r : rows)
    out << fmt(r.xi1) << ',' << fmt(r.xi2) << ',' << fmt(r.wA) << ',' << fmt(r.w1) << ','
        << (r.tighter > 0 ? "A" : (r.tighter < 0 ? "1" : "tie")) << '\n';
  return out.str();
}

OrderingReport verify_pointwise_weight_ordering(long samples, std::uint64_t seed) {
  Rng rng(seed);
  OrderingReport report;
  const double hp = 1.5707963267948966;
  while (report.samples < samples) {
    double th1 = rng.uniform(-hp + 1e-9, hp - 1e-9);
    double th2 = rng.uniform(-hp + 1e-9, hp - 1e-9);
    double x1 = std::tan(std::min(th1, th2));
    double x2 = std::tan(std::max(th1, th2));
    if (!(x2 - x1 > 1e-12)) continue;
    ++report.samples;
    double inv_j = 1.0 / jacobian_stable(x1, x2);
    double wmin = std::min(weight_A(x1, x2), weight_1(x1, x2));
    report.max_excess = std::max(report.max_excess, inv_j / wmin);
    if (inv_j > wmin * (1.0 + 1e-9)) ++report.violations;
  }
  return report;
}

std::string BilinearReport::to_json() const {
  nlohmann::json j;
  j["profile1"] = profile1;
  j["profile2"] = profile2;
  j["spacetime"] = fmt(spacetime);
  j["frequency"] = fmt(frequency);
  j["bound_A"] = fmt(bound_A);
  j["bound_1"] = fmt(bound_1);
  j["truncation"] = fmt(truncation);
  j["identity_rel_err"] = fmt(identity_rel_err);
  j["alias_fraction"] = fmt(alias_fraction);
  j["grid"] = {
      {"L", fmt(grid_L)},      {"nx", grid_nx},        {"dt", fmt(grid_dt)},
      {"t_final", fmt(t_final)}, {"dxi1", fmt(dxi1)},  {"dxi2", fmt(dxi2)},
  };
  return j.dump(1);
}

std::string BilinearReport::csv_header() {
  return "profile1,profile2,spacetime,frequency,bound_A,bound_1,truncation,identity_rel_err,"
         "alias_fraction,t_final\n";
}

std::string BilinearReport::to_csv_row() const {
  std::ostringstream out;
  out << '"' << profile1 << "\",\"" << profile2 << "\"," << fmt(spacetime) << ',' << fmt(frequency)
      << ',' << fmt(bound_A) << ',' << fmt(bound_1) << ',' << fmt(truncation) << ','
      << fmt(identity_rel_err) << ',' << fmt(alias_fraction) << ',' << fmt(t_final) << '\n';
  return out.str();
}

BilinearReport make_report(const FrequencyProfile& p1, const FrequencyProfile& p2,
                           const SpaceTimeGrid& grid, double rel_tol, int workers) {
  require_disjoint(p1, p2);
  BilinearReport r;
  r.profile1 = p1.describe();
  r.profile2 = p2.describe();
  r.frequency = bilinear_norm_frequency(p1, p2);
  r.bound_A = kgv::bound_A(p1, p2);
  r.bound_1 = kgv::bound_1(p1, p2);
  SpaceTimeNorm st = bilinear_norm_spacetime(p1, p2, grid, rel_tol, workers);
  r.spacetime = st.value;
  r.truncation = st.truncation;
  r.t_final = st.t_final;
  r.alias_fraction = st.alias_fraction;
  r.identity_rel_err = r.frequency > 0.0 ? std::fabs(r.spacetime - r.frequency) / r.frequency : 0.0;
  r.grid_L = grid.L;
  r.grid_nx = grid.nx;
  r.grid_dt = grid.dt;
  r.dxi1 = p1.dxi;
  r.dxi2 = p2.dxi;
  return r;
}

}  // namespace kgv
