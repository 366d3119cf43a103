#include "kgv/sharpness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "kgv/bigfloat.hpp"
#include "kgv/errors.hpp"
#include "kgv/kgfun.hpp"
#include "kgv/parallel.hpp"
#include "kgv/rng.hpp"

namespace kgv {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double violation_lhs(double a, double xi1, double xi2) {
  return (xi2 - xi1) * std::pow(1.0 + xi1 * xi1, -a) * std::pow(1.0 + xi2 * xi2, -a);
}

void check_violation_args(double a, double C) {
  if (!(a > 0.5 && a < 0.75)) throw BadExponentRange("exponent must lie in (1/2, 3/4)");
  if (!(C >= 1.0) || !std::isfinite(C)) throw InvalidParameter("constant must satisfy 1 <= C < inf");
}

}  // namespace

Violation find_violation(double a, double C) {
  check_violation_args(a, C);

  // seed point: C (1+xi1^2)^(2a-3/2) <= 1/2, i.e. the limiting ratio
  // lhs/rhs as xi2 -> xi1 is already >= 2
  double xi1 = std::sqrt(std::max(0.0, std::exp(std::log(2.0 * C) / (1.5 - 2.0 * a)) - 1.0));
  xi1 = std::max(xi1, 1.0);
  while (C * std::pow(1.0 + xi1 * xi1, 2.0 * a - 1.5) > 0.5) xi1 *= 2.0;

  for (int round = 0; round < 8; ++round, xi1 *= 4.0) {
    if (!(xi1 < 1e70)) break;  // keep the stable-Jacobian products in range
    // xi1 + 1 is not representable once xi1 > 2^53; scale the first offset
    const double h0 = std::max(1.0, xi1 * 0x1p-20);
    for (int k = 0; k <= 120; ++k) {
      const double xi2 = xi1 + h0 * std::ldexp(1.0, -k);
      if (!(xi2 > xi1)) break;  // increment absorbed
      const double lhs = violation_lhs(a, xi1, xi2);
      const double rhs = C * jacobian_stable(xi1, xi2);
      const double margin = rhs - lhs;
      if (margin < -1e-3 * rhs) {
        Violation v{a, C, xi1, xi2, lhs, rhs, margin};
        if (verify_violation_highprec(v)) return v;
      }
    }
  }
  throw SearchFailed("no violation found for a=" + fmt(a) + ", C=" + fmt(C));
}

bool verify_violation_highprec(const Violation& v) {
  // the direct Jacobian difference loses ~2*log10(xi1) digits; size the
  // precision so >= 60 digits survive
  int mag = 0;
  if (std::fabs(v.xi1) >= 1.0) mag = std::ilogb(std::fabs(v.xi1)) + 1;
  const long prec = 256 + 4L * mag;
  BigFloat x1(v.xi1, prec), x2(v.xi2, prec), one(1.0, prec);
  BigFloat q1 = one + x1 * x1;
  BigFloat q2 = one + x2 * x2;
  BigFloat lhs = (x2 - x1) / (pow(q1, v.a) * pow(q2, v.a));
  BigFloat rhs = BigFloat(v.C, prec) * (x2 / sqrt(q2) - x1 / sqrt(q1));
  BigFloat margin = rhs - lhs;
  return margin.sign() < 0;
}

std::vector<Violation> violation_grid(const std::vector<double>& a_grid,
                                      const std::vector<double>& c_grid, int workers) {
  for (double a : a_grid)
    for (double c : c_grid) check_violation_args(a, c);
  std::vector<Violation> rows(a_grid.size() * c_grid.size());
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    double a = a_grid[i / c_grid.size()];
    double c = c_grid[i % c_grid.size()];
    rows[i] = find_violation(a, c);
  });
  return rows;
}

std::string trace_family_name(TraceFamily f) {
  switch (f) {
    case TraceFamily::sigma1_over_J: return "sigma1_over_J";
    case TraceFamily::sigma2_over_J: return "sigma2_over_J";
    case TraceFamily::sigmaAlpha_over_J: return "sigmaAlpha_over_J";
  }
  return "?";
}

TraceFamily trace_family_from_name(const std::string& name) {
  if (name == "sigma1_over_J") return TraceFamily::sigma1_over_J;
  if (name == "sigma2_over_J") return TraceFamily::sigma2_over_J;
  if (name == "sigmaAlpha_over_J") return TraceFamily::sigmaAlpha_over_J;
  throw InvalidParameter("unknown trace family: " + name);
}

RatioTrace extremal_ratio(TraceFamily family, int n_samples) {
  if (n_samples < 1) throw InvalidParameter("trace needs at least one sample");
  RatioTrace trace;
  trace.family = family;
  switch (family) {
    case TraceFamily::sigma1_over_J: {
      trace.path = "xi1 = 0, xi2 = 10^-k, k = 1.." + std::to_string(n_samples);
      AlphaParam one = AlphaParam::certifiable(1.0);
      for (int k = 1; k <= n_samples; ++k) {
        double xi2 = std::pow(10.0, -k);
        double ratio = sigma(one, 0.0, xi2) / jacobian_stable(0.0, xi2);
        trace.samples.emplace_back(xi2, ratio);
      }
      break;
    }
    case TraceFamily::sigma2_over_J: {
      trace.path = "xi1 = 10^k, xi2 = 10^(3k), k = 1.." + std::to_string(n_samples);
      AlphaParam two = AlphaParam::certifiable(2.0);
      for (int k = 1; k <= n_samples; ++k) {
        double xi1 = std::pow(10.0, k);
        double xi2 = std::pow(10.0, 3 * k);
        if (!(xi2 < 1e50)) break;  // keep squares inside double range
        double ratio = sigma(two, xi1, xi2) / jacobian_stable(xi1, xi2);
        trace.samples.emplace_back(xi1, ratio);
      }
      break;
    }
    case TraceFamily::sigmaAlpha_over_J:
      throw InvalidParameter("sigmaAlpha_over_J traces come from alpha_blowup_slope");
  }
  return trace;
}

SlopeFit alpha_blowup_slope(double alpha, double xi1) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha outside (0, 1]");
  if (!std::isfinite(xi1)) throw InvalidParameter("xi1 must be finite");
  SlopeFit fit;
  fit.alpha = alpha;
  fit.xi1 = xi1;
  AlphaParam ap = AlphaParam::experimental(alpha);
  for (int k = 2; k <= 10; ++k) {
    double xi2 = xi1 + std::pow(10.0, -k);
    double gap = xi2 - xi1;  // exact difference of the rounded point
    if (gap <= 0.0) break;
    double ratio = sigma(ap, xi1, xi2) / jacobian_stable(xi1, xi2);
    fit.points.emplace_back(std::log(gap), std::log(ratio));
  }
  if (fit.points.size() < 3) throw SearchFailed("not enough usable gap points for the slope fit");
  double n = static_cast<double>(fit.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : fit.points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

long no_violation_scan(double a, double C, long samples, std::uint64_t seed) {
  Rng rng(seed);
  const double hp = 1.5707963267948966;
  long confirmed = 0;
  for (long i = 0; i < samples; ++i) {
    double th1 = rng.uniform(-hp + 1e-9, hp - 1e-9);
    double th2 = rng.uniform(-hp + 1e-9, hp - 1e-9);
    double xi1 = std::tan(std::min(th1, th2));
    double xi2 = std::tan(std::max(th1, th2));
    if (!(xi2 > xi1)) continue;
    double margin = C * jacobian_stable(xi1, xi2) - violation_lhs(a, xi1, xi2);
    if (margin < 0.0) {
      Violation v{a, C, xi1, xi2, 0.0, 0.0, margin};
      if (verify_violation_highprec(v)) ++confirmed;
    }
  }
  return confirmed;
}

std::string violations_to_csv(const std::vector<Violation>& rows) {
  std::ostringstream out;
  out << "a,C,xi1,xi2,lhs,rhs,margin\n";
  for (const auto& v : rows)
    out << fmt(v.a) << ',' << fmt(v.C) << ',' << fmt(v.xi1) << ',' << fmt(v.xi2) << ','
        << fmt(v.lhs) << ',' << fmt(v.rhs) << ',' << fmt(v.margin) << '\n';
  return out.str();
}

std::string violations_to_jsonl(const std::vector<Violation>& rows) {
  std::ostringstream out;
  for (const auto& v : rows)
    out << "{\"a\":" << fmt(v.a) << ",\"C\":" << fmt(v.C) << ",\"xi1\":" << fmt(v.xi1)
        << ",\"xi2\":" << fmt(v.xi2) << ",\"lhs\":" << fmt(v.lhs) << ",\"rhs\":" << fmt(v.rhs)
        << ",\"margin\":" << fmt(v.margin) << "}\n";
  return out.str();
}

std::string trace_to_csv(const RatioTrace& trace) {
  std::ostringstream out;
  out << "family,k,parameter,ratio\n";
  for (std::size_t k = 0; k < trace.samples.size(); ++k)
    out << trace_family_name(trace.family) << ',' << (k + 1) << ','
        << fmt(trace.samples[k].first) << ',' << fmt(trace.samples[k].second) << '\n';
  return out.str();
}

}  // namespace kgv
