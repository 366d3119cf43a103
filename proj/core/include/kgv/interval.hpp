#ifndef KGV_INTERVAL_HPP
#define KGV_INTERVAL_HPP

#include <cmath>
#include <cstdint>
#include <utility>

#include "kgv/errors.hpp"

namespace kgv {

// Reduced fraction; carries the dyadic exponents 3/4, 1/4, 1/2 that the
// weight and sigma formulas need, plus arbitrary small rationals.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);

  double as_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }
  // true when den is a power of two (the exact-monotone sqrt-chain case)
  bool dyadic() const { return (den & (den - 1)) == 0; }
};

// Closed interval [lo, hi] of doubles with outward-rounded arithmetic.
// Every operation returns an enclosure of the exact real range; exact
// results stay exact (endpoint adjustment only happens when the IEEE
// rounding was inexact, detected via error-free residuals).
//
// Endpoints may be +-inf only as pass-through bounds (e.g. overflow of an
// upper endpoint); operations reject non-finite inputs. Values are
// immutable and all functions are pure; no rounding-mode state is touched,
// so concurrent use needs no coordination.
class Interval {
 public:
  Interval() : lo_(0.0), hi_(0.0) {}
  Interval(double v) : lo_(v), hi_(v) { check(); }  // NOLINT: implicit by design
  Interval(double lo, double hi) : lo_(lo), hi_(hi) { check(); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  bool is_point() const { return lo_ == hi_; }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
  bool finite() const { return std::isfinite(lo_) && std::isfinite(hi_); }

 private:
  void check() const {
    if (std::isnan(lo_) || std::isnan(hi_) || !(lo_ <= hi_))
      throw InvalidInterval();
  }
  double lo_;
  double hi_;
};

Interval add(Interval x, Interval y);
Interval sub(Interval x, Interval y);
Interval mul(Interval x, Interval y);
Interval div(Interval x, Interval y);  // throws DivisionByZeroInterval if 0 in y
Interval neg(Interval x);
Interval abs(Interval x);
Interval sqr(Interval x);  // tighter than mul(x, x): knows the range is >= 0

inline Interval operator+(Interval x, Interval y) { return add(x, y); }
inline Interval operator-(Interval x, Interval y) { return sub(x, y); }
inline Interval operator*(Interval x, Interval y) { return mul(x, y); }
inline Interval operator/(Interval x, Interval y) { return div(x, y); }
inline Interval operator-(Interval x) { return neg(x); }

enum class SqrtPolicy { clamp, strict };

// Enclosure of sqrt over x intersected with [0, inf). A negative lower
// endpoint is clamped to 0 under the default policy and raises
// NegativeDomain under strict; x.hi < 0 always raises.
Interval sqrt(Interval x, SqrtPolicy policy = SqrtPolicy::clamp);

// x^n for integer n; even powers use the sign-aware square so results
// never dip below zero.
Interval pow_int(Interval x, long long n);

// x^(num/den). Non-integer exponents require x.lo >= 0 (NegativeDomain).
// Dyadic denominators run a verify-and-adjust path against the exact
// relation l^den <= x^num, so the critical exponents (3/4, 1/4, 1/2) stay
// within a couple of ulps; other rationals fall back to the exp/log
// enclosure. p.num == 0 yields [1,1] (0^0 := 1, the sigma convention).
Interval pow_rational(Interval x, Rational p);

// x^p for a real exponent (exp/log enclosure); x.lo >= 0 required unless
// p is integral-valued. Used by the rigorous kgfun path for real alpha.
Interval pow_real(Interval x, double p);

Interval exp_enclosure(Interval x);
Interval log_enclosure(Interval x);  // throws NegativeDomain if x.lo <= 0

// Range enclosures of sin/cos accounting for interior extrema.
// Supported arguments: x within [-2*pi, 2*pi] (DomainTooWide outside).
Interval sin_enclosure(Interval x);
Interval cos_enclosure(Interval x);

double width(Interval x);     // hi - lo, rounded up
double midpoint(Interval x);  // a point strictly inside for non-degenerate x
std::pair<Interval, Interval> bisect(Interval x);  // throws ZeroWidth

// Intersection; throws InvalidInterval when empty.
Interval intersect(Interval x, Interval y);
Interval hull(Interval x, Interval y);

// Enclosure of pi and pi/2 (true value strictly inside).
Interval pi_interval();
Interval half_pi_interval();

namespace detail {
// Directed-rounding scalar helpers exposed for tests.
double next_down(double x);
double next_up(double x);
double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double a);
double sqrt_up(double a);
}  // namespace detail

}  // namespace kgv

#endif  // KGV_INTERVAL_HPP
