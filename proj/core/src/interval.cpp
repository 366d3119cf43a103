#include "kgv/interval.hpp"

#include <algorithm>
#include <cfloat>
#include <limits>
#include <numbers>
#include <numeric>

namespace kgv {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw InvalidParameter("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

namespace detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude the fma residual trick can lose bits to underflow;
// fall back to an unconditional outward step.
constexpr double kResidualSafe = 0x1p-960;

inline void require_finite(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InfiniteEndpoint();
}

}  // namespace

double next_down(double x) { return std::nextafter(x, -kInf); }
double next_up(double x) { return std::nextafter(x, kInf); }

// Knuth TwoSum residual: err == 0 iff fl(a+b) is exact.
static inline double twosum_err(double a, double b, double s) {
  double bb = s - a;
  double aa = s - bb;
  return (a - aa) + (b - bb);
}

double add_down(double a, double b) {
  double s = a + b;
  if (!std::isfinite(s)) return s > 0 ? DBL_MAX : -kInf;
  double e = twosum_err(a, b, s);
  return e < 0 ? next_down(s) : s;
}

double add_up(double a, double b) {
  double s = a + b;
  if (!std::isfinite(s)) return s > 0 ? kInf : -DBL_MAX;
  double e = twosum_err(a, b, s);
  return e > 0 ? next_up(s) : s;
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
  double p = a * b;
  if (!std::isfinite(p)) return p > 0 ? DBL_MAX : -kInf;
  if (std::fabs(p) < kResidualSafe) return p == 0.0 && std::fma(a, b, 0.0) == 0.0 ? p : next_down(p);
  double e = std::fma(a, b, -p);
  return e < 0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
  double p = a * b;
  if (!std::isfinite(p)) return p > 0 ? kInf : -DBL_MAX;
  if (std::fabs(p) < kResidualSafe) return p == 0.0 && std::fma(a, b, 0.0) == 0.0 ? p : next_up(p);
  double e = std::fma(a, b, -p);
  return e > 0 ? next_up(p) : p;
}

double div_down(double a, double b) {
  double q = a / b;
  if (!std::isfinite(q)) return q > 0 ? DBL_MAX : -kInf;
  if (std::fabs(q) < kResidualSafe || std::fabs(a) < kResidualSafe)
    return q == 0.0 && a == 0.0 ? q : next_down(q);
  // sign(q - a/b) = sign(q*b - a) * sign(b)
  double r = std::fma(q, b, -a);
  double excess = b > 0 ? r : -r;
  return excess > 0 ? next_down(q) : q;
}

double div_up(double a, double b) {
  double q = a / b;
  if (!std::isfinite(q)) return q > 0 ? kInf : -DBL_MAX;
  if (std::fabs(q) < kResidualSafe || std::fabs(a) < kResidualSafe)
    return q == 0.0 && a == 0.0 ? q : next_up(q);
  double r = std::fma(q, b, -a);
  double excess = b > 0 ? r : -r;
  return excess < 0 ? next_up(q) : q;
}

double sqrt_down(double a) {
  double s = std::sqrt(a);
  if (std::fabs(a) < kResidualSafe) return a == 0.0 ? 0.0 : std::max(0.0, next_down(s));
  double r = std::fma(s, s, -a);  // sign(s - sqrt(a)) = sign(s*s - a)
  return r > 0 ? next_down(s) : s;
}

double sqrt_up(double a) {
  double s = std::sqrt(a);
  if (std::fabs(a) < kResidualSafe) return a == 0.0 ? 0.0 : next_up(s);
  double r = std::fma(s, s, -a);
  return r < 0 ? next_up(s) : s;
}

// libm exp/log are within 1 ulp on this toolchain; two outward steps keep a
// margin, and the randomized containment suite audits the assumption.
static double exp_down(double x) { return std::max(0.0, next_down(next_down(std::exp(x)))); }
static double exp_up(double x) { return next_up(next_up(std::exp(x))); }
static double log_down(double x) { return next_down(next_down(std::log(x))); }
static double log_up(double x) { return next_up(next_up(std::log(x))); }

static double pospow_down(double x, long long n);
static double pospow_up(double x, long long n);

// Square-and-multiply with all intermediates rounded down; x >= 0, n >= 1.
static double pospow_down(double x, long long n) {
  double result = 1.0;
  double base = x;
  bool first = true;
  long long e = n;
  // peel the low bits; `result` starts as the first odd-bit factor to keep
  // the n == 1 case exact
  while (e > 0) {
    if (e & 1) {
      result = first ? base : mul_down(result, base);
      first = false;
    }
    e >>= 1;
    if (e > 0) base = mul_down(base, base);
  }
  return result;
}

static double pospow_up(double x, long long n) {
  double result = 1.0;
  double base = x;
  bool first = true;
  long long e = n;
  while (e > 0) {
    if (e & 1) {
      result = first ? base : mul_up(result, base);
      first = false;
    }
    e >>= 1;
    if (e > 0) base = mul_up(base, base);
  }
  return result;
}

}  // namespace detail

using namespace detail;

namespace {

inline void require_op_finite(Interval x) {
  if (!x.finite()) throw InfiniteEndpoint();
}

Interval make(double lo, double hi) {
  // normalize signed zeros so serialized endpoints are canonical
  if (lo == 0.0) lo = 0.0;
  if (hi == 0.0) hi = 0.0;
  return Interval(lo, hi);
}

}  // namespace

Interval add(Interval x, Interval y) {
  require_op_finite(x);
  require_op_finite(y);
  return make(add_down(x.lo(), y.lo()), add_up(x.hi(), y.hi()));
}

Interval sub(Interval x, Interval y) {
  require_op_finite(x);
  require_op_finite(y);
  return make(sub_down(x.lo(), y.hi()), sub_up(x.hi(), y.lo()));
}

Interval neg(Interval x) { return make(-x.hi(), -x.lo()); }

Interval abs(Interval x) {
  if (x.lo() >= 0.0) return x;
  if (x.hi() <= 0.0) return neg(x);
  return make(0.0, std::max(-x.lo(), x.hi()));
}

Interval mul(Interval x, Interval y) {
  require_op_finite(x);
  require_op_finite(y);
  const double c[4][2] = {{x.lo(), y.lo()}, {x.lo(), y.hi()}, {x.hi(), y.lo()}, {x.hi(), y.hi()}};
  double lo = mul_down(c[0][0], c[0][1]);
  double hi = mul_up(c[0][0], c[0][1]);
  for (int i = 1; i < 4; ++i) {
    lo = std::min(lo, mul_down(c[i][0], c[i][1]));
    hi = std::max(hi, mul_up(c[i][0], c[i][1]));
  }
  return make(lo, hi);
}

Interval div(Interval x, Interval y) {
  require_op_finite(x);
  require_op_finite(y);
  if (y.contains_zero()) throw DivisionByZeroInterval();
  const double c[4][2] = {{x.lo(), y.lo()}, {x.lo(), y.hi()}, {x.hi(), y.lo()}, {x.hi(), y.hi()}};
  double lo = div_down(c[0][0], c[0][1]);
  double hi = div_up(c[0][0], c[0][1]);
  for (int i = 1; i < 4; ++i) {
    lo = std::min(lo, div_down(c[i][0], c[i][1]));
    hi = std::max(hi, div_up(c[i][0], c[i][1]));
  }
  return make(lo, hi);
}

Interval sqr(Interval x) {
  require_op_finite(x);
  if (x.lo() >= 0.0) return make(mul_down(x.lo(), x.lo()), mul_up(x.hi(), x.hi()));
  if (x.hi() <= 0.0) return make(mul_down(x.hi(), x.hi()), mul_up(x.lo(), x.lo()));
  return make(0.0, std::max(mul_up(x.lo(), x.lo()), mul_up(x.hi(), x.hi())));
}

Interval sqrt(Interval x, SqrtPolicy policy) {
  require_op_finite(x);
  if (x.hi() < 0.0) throw NegativeDomain("sqrt of an entirely negative interval");
  double lo = x.lo();
  if (lo < 0.0) {
    if (policy == SqrtPolicy::strict) throw NegativeDomain("sqrt with negative lower endpoint (strict)");
    lo = 0.0;
  }
  return make(sqrt_down(lo), sqrt_up(x.hi()));
}

Interval pow_int(Interval x, long long n) {
  require_op_finite(x);
  if (n == 0) return Interval(1.0);
  if (n < 0) return div(Interval(1.0), pow_int(x, -n));
  if (n == 1) return x;
  const bool even = (n % 2 == 0);
  if (x.lo() >= 0.0) return make(pospow_down(x.lo(), n), pospow_up(x.hi(), n));
  if (x.hi() <= 0.0) {
    double alo = -x.hi(), ahi = -x.lo();
    if (even) return make(pospow_down(alo, n), pospow_up(ahi, n));
    return make(-pospow_up(ahi, n), -pospow_down(alo, n));
  }
  if (even) return make(0.0, std::max(pospow_up(-x.lo(), n), pospow_up(x.hi(), n)));
  return make(-pospow_up(-x.lo(), n), pospow_up(x.hi(), n));
}

namespace {

// Lower bound of x^(num/den) on x >= 0, dyadic den, num >= 1: start from the
// libm candidate and step down until l^den <= x^num is certified by the
// directed integer powers.
double dyadic_pow_down(double x, long long num, long long den, bool& ok) {
  ok = true;
  if (x == 0.0) return 0.0;
  double v = std::pow(x, static_cast<double>(num) / static_cast<double>(den));
  for (int i = 0; i < 64; ++i) {
    if (pospow_up(v, den) <= pospow_down(x, num)) return std::max(v, 0.0);
    v = next_down(v);
  }
  ok = false;
  return 0.0;
}

double dyadic_pow_up(double x, long long num, long long den, bool& ok) {
  ok = true;
  if (x == 0.0) return 0.0;
  double v = std::pow(x, static_cast<double>(num) / static_cast<double>(den));
  for (int i = 0; i < 64; ++i) {
    if (pospow_down(v, den) >= pospow_up(x, num)) return v;
    v = next_up(v);
  }
  ok = false;
  return 0.0;
}

double explog_pow_down(double x, double p) {
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double l = p >= 0 ? log_down(x) : log_up(x);
  return exp_down(mul_down(p, l));
}

double explog_pow_up(double x, double p) {
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double l = p >= 0 ? log_up(x) : log_down(x);
  return exp_up(mul_up(p, l));
}

}  // namespace

Interval pow_rational(Interval x, Rational p) {
  require_op_finite(x);
  if (p.num == 0) return Interval(1.0);
  if (p.den == 1) return pow_int(x, p.num);
  if (x.lo() < 0.0) throw NegativeDomain("fractional power of a negative base");
  if (p.num < 0) return div(Interval(1.0), pow_rational(x, Rational(-p.num, p.den)));
  if (p.dyadic()) {
    bool ok_lo = false, ok_hi = false;
    double lo = dyadic_pow_down(x.lo(), p.num, p.den, ok_lo);
    double hi = dyadic_pow_up(x.hi(), p.num, p.den, ok_hi);
    if (ok_lo && ok_hi) return make(lo, hi);
    // fall through on overflow in the verification powers
  }
  double pd = p.as_double();
  double plo = div_down(static_cast<double>(p.num), static_cast<double>(p.den));
  double phi = div_up(static_cast<double>(p.num), static_cast<double>(p.den));
  double lo, hi;
  if (plo == phi) {
    lo = explog_pow_down(x.lo(), pd);
    hi = explog_pow_up(x.hi(), pd);
  } else {
    // exponent itself is not a double; widen over both endpoints
    lo = std::min(explog_pow_down(x.lo(), plo), explog_pow_down(x.lo(), phi));
    hi = std::max(explog_pow_up(x.hi(), plo), explog_pow_up(x.hi(), phi));
  }
  return make(lo, hi);
}

Interval pow_real(Interval x, double p) {
  require_op_finite(x);
  if (!std::isfinite(p)) throw InvalidParameter("non-finite exponent");
  if (p == 0.0) return Interval(1.0);
  if (p == std::rint(p) && std::fabs(p) < 0x1p62)
    return pow_int(x, static_cast<long long>(p));
  if (x.lo() < 0.0) throw NegativeDomain("fractional power of a negative base");
  if (p < 0.0) return div(Interval(1.0), pow_real(x, -p));
  return make(explog_pow_down(x.lo(), p), explog_pow_up(x.hi(), p));
}

Interval exp_enclosure(Interval x) {
  require_op_finite(x);
  return make(exp_down(x.lo()), exp_up(x.hi()));
}

Interval log_enclosure(Interval x) {
  require_op_finite(x);
  if (x.lo() <= 0.0) throw NegativeDomain("log requires a strictly positive interval");
  return make(log_down(x.lo()), log_up(x.hi()));
}

Interval pi_interval() {
  const double lo = std::numbers::pi;  // nearest double sits below pi
  return Interval(lo, next_up(lo));
}

Interval half_pi_interval() {
  Interval p = pi_interval();
  return Interval(p.lo() / 2.0, p.hi() / 2.0);  // scaling by 1/2 is exact
}

namespace {

Interval trig_enclosure(Interval x, bool is_sin) {
  require_op_finite(x);
  Interval pi = pi_interval();
  double two_pi_hi = 2.0 * pi.hi();
  if (x.lo() < -two_pi_hi || x.hi() > two_pi_hi)
    throw DomainTooWide("sin/cos argument outside [-2pi, 2pi]");
  if (x.is_point() && x.lo() == 0.0) return is_sin ? Interval(0.0) : Interval(1.0);

  auto fd = [&](double t) { return next_down(next_down(is_sin ? std::sin(t) : std::cos(t))); };
  auto fu = [&](double t) { return next_up(next_up(is_sin ? std::sin(t) : std::cos(t))); };
  double lo = std::min(fd(x.lo()), fd(x.hi()));
  double hi = std::max(fu(x.lo()), fu(x.hi()));

  // interior extrema: multiples of pi/2 inside [-2pi, 2pi]
  struct Extremum {
    double half_multiples;  // extremum at (m/2) * pi
    double value;
  };
  static const Extremum sin_ext[] = {{-3.0, 1.0}, {1.0, 1.0}, {-1.0, -1.0}, {3.0, -1.0}};
  static const Extremum cos_ext[] = {{-4.0, 1.0}, {0.0, 1.0}, {4.0, 1.0}, {-2.0, -1.0}, {2.0, -1.0}};
  const Extremum* ext = is_sin ? sin_ext : cos_ext;
  const int n = is_sin ? 4 : 5;
  for (int i = 0; i < n; ++i) {
    double m2 = ext[i].half_multiples / 2.0;
    Interval point = mul(pi, Interval(m2));
    if (point.lo() <= x.hi() && x.lo() <= point.hi()) {
      lo = std::min(lo, ext[i].value);
      hi = std::max(hi, ext[i].value);
    }
  }
  lo = std::max(lo, -1.0);
  hi = std::min(hi, 1.0);
  return Interval(lo == 0.0 ? 0.0 : lo, hi == 0.0 ? 0.0 : hi);
}

}  // namespace

Interval sin_enclosure(Interval x) { return trig_enclosure(x, true); }
Interval cos_enclosure(Interval x) { return trig_enclosure(x, false); }

double width(Interval x) {
  return sub_up(x.hi(), x.lo());
}

double midpoint(Interval x) {
  double m = 0.5 * (x.lo() + x.hi());
  if (!std::isfinite(m) || m < x.lo() || m > x.hi()) m = x.lo() + 0.5 * (x.hi() - x.lo());
  return std::clamp(m, x.lo(), x.hi());
}

std::pair<Interval, Interval> bisect(Interval x) {
  if (!(width(x) > 0.0)) throw ZeroWidth();
  double m = midpoint(x);
  if (!(m > x.lo() && m < x.hi())) throw ZeroWidth("no interior point between adjacent doubles");
  return {Interval(x.lo(), m), Interval(m, x.hi())};
}

Interval intersect(Interval x, Interval y) {
  double lo = std::max(x.lo(), y.lo());
  double hi = std::min(x.hi(), y.hi());
  if (!(lo <= hi)) throw InvalidInterval("empty intersection");
  return Interval(lo, hi);
}

Interval hull(Interval x, Interval y) {
  return Interval(std::min(x.lo(), y.lo()), std::max(x.hi(), y.hi()));
}

}  // namespace kgv
