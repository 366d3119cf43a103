#include "kgv/kgfun.hpp"

#include <algorithm>

namespace kgv {

namespace {

inline void require_finite(double x) {
  if (!std::isfinite(x)) throw InvalidParameter("xi-form operations take finite arguments; use the s-form for +-infinity");
}

inline void require_finite2(double a, double b) {
  require_finite(a);
  require_finite(b);
}

inline double hyp(double xi) { return std::sqrt(1.0 + xi * xi); }  // sqrt(1 + xi^2)

inline Interval hyp(Interval xi) { return sqrt(add(Interval(1.0), sqr(xi))); }

}  // namespace

// --- coordinate maps -------------------------------------------------------

double to_s(double xi) {
  require_finite(xi);
  if (std::fabs(xi) > 0x1p100)  // avoid overflow of xi^2; 1/xi^2 is exact enough here
    return std::copysign(1.0 / std::sqrt(1.0 + 1.0 / (xi * xi)), xi);
  return xi / hyp(xi);
}

Interval to_s(Interval xi) { return div(xi, hyp(xi)); }

double to_xi(double s) {
  if (std::fabs(s) >= 1.0) throw PoleAtUnitCircle();
  return s / std::sqrt(1.0 - s * s);
}

Interval to_xi(Interval s) {
  if (s.lo() <= -1.0 || s.hi() >= 1.0) throw PoleAtUnitCircle();
  return div(s, sqrt(sub(Interval(1.0), sqr(s))));
}

// --- Jacobian and chordal distance ------------------------------------------

double jacobian(double xi1, double xi2) {
  require_finite2(xi1, xi2);
  return std::fabs(to_s(xi1) - to_s(xi2));
}

Interval jacobian(Interval xi1, Interval xi2) { return abs(sub(to_s(xi1), to_s(xi2))); }

double jacobian_s(double s1, double s2) { return std::fabs(s1 - s2); }

Interval jacobian_s(Interval s1, Interval s2) { return abs(sub(s1, s2)); }

double jacobian_stable(double xi1, double xi2) {
  require_finite2(xi1, xi2);
  if ((xi1 >= 0.0) != (xi2 >= 0.0)) return jacobian(xi1, xi2);
  double r1 = hyp(xi1), r2 = hyp(xi2);
  double num = std::fabs(xi1 - xi2) * std::fabs(xi1 + xi2);
  double den = std::fabs(xi1 * r2 + xi2 * r1) * (r1 * r2);
  if (den == 0.0) return 0.0;  // only at xi1 == xi2 == 0
  return num / den;
}

double chordal(double xi1, double xi2) {
  require_finite2(xi1, xi2);
  return std::fabs(xi1 - xi2) / (hyp(xi1) * hyp(xi2));
}

Interval chordal(Interval xi1, Interval xi2) {
  return div(abs(sub(xi1, xi2)), mul(hyp(xi1), hyp(xi2)));
}

double chordal_s(double s1, double s2) {
  double c1 = std::sqrt(std::max(0.0, 1.0 - s1 * s1));
  double c2 = std::sqrt(std::max(0.0, 1.0 - s2 * s2));
  return std::fabs(s1 * c2 - s2 * c1);
}

Interval chordal_s(Interval s1, Interval s2) {
  Interval c1 = sqrt(sub(Interval(1.0), sqr(s1)));
  Interval c2 = sqrt(sub(Interval(1.0), sqr(s2)));
  return abs(sub(mul(s1, c2), mul(s2, c1)));
}

// --- sigma -------------------------------------------------------------------

double sigma(const AlphaParam& alpha, double xi1, double xi2) {
  require_finite2(xi1, xi2);
  double a = alpha.value();
  double q = (1.0 + xi1 * xi1) * (1.0 + xi2 * xi2);
  return std::pow(std::fabs(xi1 - xi2), a) / std::pow(q, 0.5 + 0.25 * a);
}

Interval sigma(const AlphaParam& alpha, Interval xi1, Interval xi2) {
  double a = alpha.value();
  Interval q = mul(add(Interval(1.0), sqr(xi1)), add(Interval(1.0), sqr(xi2)));
  return div(pow_real(abs(sub(xi1, xi2)), a), pow_real(q, 0.5 + 0.25 * a));
}

double sigma_s(const AlphaParam& alpha, double s1, double s2) {
  double a = alpha.value();
  double chi = chordal_s(s1, s2);
  double damp = std::max(0.0, (1.0 - s1 * s1)) * std::max(0.0, (1.0 - s2 * s2));
  return std::pow(chi, a) * std::pow(damp, 0.25 * (2.0 - a));
}

Interval sigma_s(const AlphaParam& alpha, Interval s1, Interval s2) {
  double a = alpha.value();
  Interval chi = chordal_s(s1, s2);
  Interval damp = mul(sub(Interval(1.0), sqr(s1)), sub(Interval(1.0), sqr(s2)));
  damp = intersect(damp, Interval(0.0, 1.0));
  return mul(pow_real(chi, a), pow_real(damp, 0.25 * (2.0 - a)));
}

// --- weights -----------------------------------------------------------------

double weight_A(double xi1, double xi2) {
  require_finite2(xi1, xi2);
  if (xi1 == xi2) throw DiagonalSingularity();
  double q1 = 1.0 + xi1 * xi1, q2 = 1.0 + xi2 * xi2;
  return std::pow(q1, 0.75) * std::pow(q2, 0.75) / std::fabs(xi2 - xi1);
}

Interval weight_A(Interval xi1, Interval xi2) {
  Interval gap = abs(sub(xi2, xi1));
  if (gap.contains(0.0)) throw DiagonalSingularity();
  Rational three_quarters(3, 4);
  Interval q1 = pow_rational(add(Interval(1.0), sqr(xi1)), three_quarters);
  Interval q2 = pow_rational(add(Interval(1.0), sqr(xi2)), three_quarters);
  return div(mul(q1, q2), gap);
}

double weight_1(double xi1, double xi2) {
  require_finite2(xi1, xi2);
  if (xi1 == xi2) throw DiagonalSingularity();
  double rr = hyp(xi1) * hyp(xi2);
  double d = xi1 - xi2;
  return rr * (rr + 1.0 + xi1 * xi2) / (d * d);
}

Interval weight_1(Interval xi1, Interval xi2) {
  Interval d = sub(xi1, xi2);
  if (d.contains(0.0)) throw DiagonalSingularity();
  Interval rr = mul(hyp(xi1), hyp(xi2));
  return div(mul(rr, add(rr, add(Interval(1.0), mul(xi1, xi2)))), sqr(d));
}

double weight_1_s(double s1, double s2) {
  if (s1 == s2) throw DiagonalSingularity();
  double c1 = std::sqrt(std::max(0.0, 1.0 - s1 * s1));
  double c2 = std::sqrt(std::max(0.0, 1.0 - s2 * s2));
  double denom;
  // the direct denominator loses ~|s1-s2|^-2 digits to cancellation; the
  // 0.05 switch keeps the s-form within 1e-12 of the xi-form
  if (std::fabs(s1 - s2) >= 0.05) {
    denom = 1.0 - s1 * s2 - c1 * c2;
  } else {
    // 2 sin^2((theta1-theta2)/2) = sin^2(delta) / (1 + cos(delta)) with
    // sin(delta) = s1 c2 - s2 c1 expanded so the only difference taken is s1 - s2
    double sind = (s1 - s2) * (c2 + s2 * (s1 + s2) / (c1 + c2));
    double cosd = c1 * c2 + s1 * s2;
    denom = sind * sind / (1.0 + cosd);
  }
  return 1.0 / denom;
}

Interval weight_1_s(Interval s1, Interval s2) {
  Interval d = sub(s1, s2);
  if (d.contains(0.0)) throw DiagonalSingularity();
  Interval c1 = sqrt(sub(Interval(1.0), sqr(s1)));
  Interval c2 = sqrt(sub(Interval(1.0), sqr(s2)));
  // sin(theta1 - theta2) through the cancellation-free product form, then
  // 2 sin^2(d/2) = sin^2(d) / (1 + cos(d))
  Interval sind = mul(d, add(c2, div(mul(s2, add(s1, s2)), add(c1, c2))));
  Interval cosd = add(mul(c1, c2), mul(s1, s2));
  return div(add(Interval(1.0), cosd), sqr(sind));
}

// --- auxiliary convexity functions -------------------------------------------

double aux_e2(double x, double xi1) {
  require_finite2(x, xi1);
  double q1 = xi1 * xi1 + 1.0, qx = x * x + 1.0;
  return std::pow(q1, 0.75) * x * std::pow(qx, 0.25) - xi1 * std::pow(q1, 0.25) * std::pow(qx, 0.75) -
         (x - xi1);
}

double aux_e2_d1(double x, double xi1) {
  require_finite2(x, xi1);
  double q1 = xi1 * xi1 + 1.0, qx = x * x + 1.0;
  return std::pow(q1, 0.75) * std::pow(qx, 0.25) + std::pow(q1, 0.75) * x * x / (2.0 * std::pow(qx, 0.75)) -
         1.5 * xi1 * std::pow(q1, 0.25) * x / std::pow(qx, 0.25) - 1.0;
}

double aux_e2_d2(double x, double xi1) {
  require_finite2(x, xi1);
  double q1 = xi1 * xi1 + 1.0, qx = x * x + 1.0;
  return 3.0 * std::pow(q1, 0.25) * (x * x + 2.0) * (std::sqrt(q1) * x - xi1 * std::sqrt(qx)) /
         (4.0 * std::pow(qx, 1.75));
}

double aux_e5(double x, double xi1) {
  require_finite2(x, xi1);
  double r1 = hyp(xi1), rx = hyp(x);
  return -r1 * rx - xi1 * rx + r1 * x + xi1 * x + 1.0;
}

double aux_e5_d1(double x, double xi1) {
  require_finite2(x, xi1);
  double r1 = hyp(xi1), rx = hyp(x);
  return (r1 + xi1) * (rx - x) / rx;
}

double aux_e5_d2(double x, double xi1) {
  require_finite2(x, xi1);
  double r1 = hyp(xi1), qx = x * x + 1.0;
  return (-r1 - xi1) / std::pow(qx, 1.5);
}

double prop_seed_derivative(double xi1, double C, double a) {
  require_finite(xi1);
  if (!(a > 0.5 && a < 0.75)) throw BadExponentRange("exponent must lie in (1/2, 3/4)");
  if (!(C >= 1.0)) throw InvalidParameter("constant must satisfy C >= 1");
  return C * std::pow(xi1 * xi1 + 1.0, 2.0 * a - 1.5) - 1.0;
}

// rigorous flavors of the same formulas
Interval aux_e2(Interval x, Interval xi1) {
  Rational q14(1, 4), q34(3, 4);
  Interval q1 = add(sqr(xi1), Interval(1.0));
  Interval qx = add(sqr(x), Interval(1.0));
  return sub(sub(mul(mul(pow_rational(q1, q34), x), pow_rational(qx, q14)),
                 mul(mul(xi1, pow_rational(q1, q14)), pow_rational(qx, q34))),
             sub(x, xi1));
}

Interval aux_e2_d1(Interval x, Interval xi1) {
  Rational q14(1, 4), q34(3, 4);
  Interval q1 = add(sqr(xi1), Interval(1.0));
  Interval qx = add(sqr(x), Interval(1.0));
  Interval t1 = mul(pow_rational(q1, q34), pow_rational(qx, q14));
  Interval t2 = div(mul(pow_rational(q1, q34), sqr(x)), mul(Interval(2.0), pow_rational(qx, q34)));
  Interval t3 = div(mul(mul(Interval(1.5), xi1), mul(pow_rational(q1, q14), x)),
                    pow_rational(qx, q14));
  return sub(add(t1, t2), add(t3, Interval(1.0)));
}

Interval aux_e2_d2(Interval x, Interval xi1) {
  Rational q14(1, 4), q74(7, 4);
  Interval q1 = add(sqr(xi1), Interval(1.0));
  Interval qx = add(sqr(x), Interval(1.0));
  Interval num = mul(mul(Interval(3.0), pow_rational(q1, q14)),
                     mul(add(sqr(x), Interval(2.0)),
                         sub(mul(sqrt(q1), x), mul(xi1, sqrt(qx)))));
  return div(num, mul(Interval(4.0), pow_rational(qx, q74)));
}

Interval aux_e5(Interval x, Interval xi1) {
  Interval r1 = hyp(xi1), rx = hyp(x);
  return add(add(sub(neg(mul(r1, rx)), mul(xi1, rx)), add(mul(r1, x), mul(xi1, x))),
             Interval(1.0));
}

Interval aux_e5_d1(Interval x, Interval xi1) {
  Interval r1 = hyp(xi1), rx = hyp(x);
  return div(mul(add(r1, xi1), sub(rx, x)), rx);
}

Interval aux_e5_d2(Interval x, Interval xi1) {
  Interval qx = add(sqr(x), Interval(1.0));
  return div(sub(neg(hyp(xi1)), xi1), pow_rational(qx, Rational(3, 2)));
}

Interval prop_seed_derivative(Interval xi1, double C, double a) {
  if (!(a > 0.5 && a < 0.75)) throw BadExponentRange("exponent must lie in (1/2, 3/4)");
  if (!(C >= 1.0)) throw InvalidParameter("constant must satisfy C >= 1");
  Interval q1 = add(sqr(xi1), Interval(1.0));
  return sub(mul(Interval(C), pow_real(q1, 2.0 * a - 1.5)), Interval(1.0));
}

}  // namespace kgv
