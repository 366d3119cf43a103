#ifndef KGV_SHARPNESS_HPP
#define KGV_SHARPNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

// Constructive falsification and extremizer search: reproduces the
// optimality of the 3/4 exponent, the sharp-constant limits 1 and 2, and
// the alpha >= 1 necessity slope. Every reported violation is re-verified
// with the high-precision evaluator before it leaves this module.

namespace kgv {

struct Violation {
  double a = 0.0;   // exponent in (1/2, 3/4)
  double C = 1.0;   // constant multiplying the Jacobian side
  double xi1 = 0.0;
  double xi2 = 0.0;
  double lhs = 0.0;     // (xi2-xi1) / ((1+xi1^2)(1+xi2^2))^a
  double rhs = 0.0;     // C * (g(xi2) - g(xi1))
  double margin = 0.0;  // rhs - lhs, negative
};

// Strategy: pick xi1 from the closed-form seed-derivative threshold
// C (1+xi1^2)^(2a-3/2) <= 1/2, then halve xi2 toward xi1 from xi1 + h0 on
// the sign of the margin. Throws BadExponentRange / InvalidParameter on bad
// inputs and SearchFailed if the expanding xi1 budget runs out.
Violation find_violation(double a, double C);

// Recomputes the margin from (a, C, xi1, xi2) with >= 60 significant digits
// (precision adapted to |xi1| so the Jacobian-side cancellation is resolved);
// true iff the margin is strictly negative.
bool verify_violation_highprec(const Violation& v);

// Full grid run (row-major in a, then C); order-stable for any worker count.
std::vector<Violation> violation_grid(const std::vector<double>& a_grid,
                                      const std::vector<double>& c_grid, int workers = 1);

enum class TraceFamily { sigma1_over_J, sigma2_over_J, sigmaAlpha_over_J };

std::string trace_family_name(TraceFamily f);
TraceFamily trace_family_from_name(const std::string& name);

struct RatioTrace {
  TraceFamily family = TraceFamily::sigma1_over_J;
  std::string path;
  std::vector<std::pair<double, double>> samples;  // (parameter, ratio)
};

// sigma1_over_J: xi1 = 0, xi2 = 10^-k, k = 1..n; ratios increase toward 1.
// sigma2_over_J: xi1 = 10^k, xi2 = 10^(3k), k = 1..n; ratios approach 2.
RatioTrace extremal_ratio(TraceFamily family, int n_samples = 8);

struct SlopeFit {
  double alpha = 0.0;
  double xi1 = 0.0;
  double slope = 0.0;      // ~ alpha - 1
  double intercept = 0.0;
  std::vector<std::pair<double, double>> points;  // (log gap, log ratio)
};

// log-log slope of sigma_alpha/J against xi2 - xi1 = 10^-k, k = 2..10;
// alpha in (0, 1], xi1 finite. alpha = 1 is the bounded-ratio control.
SlopeFit alpha_blowup_slope(double alpha, double xi1);

// Samples xi2 > xi1 pairs and counts confirmed violations of
// lhs(a) <= C * J; double-precision negatives are re-verified in high
// precision, so the count has no roundoff false positives. Expected 0 for
// a = 3/4, C = 1.
long no_violation_scan(double a, double C, long samples, std::uint64_t seed);

// report emission (deterministic shortest-roundtrip number formatting)
std::string violations_to_csv(const std::vector<Violation>& rows);
std::string violations_to_jsonl(const std::vector<Violation>& rows);
std::string trace_to_csv(const RatioTrace& trace);

}  // namespace kgv

#endif  // KGV_SHARPNESS_HPP
