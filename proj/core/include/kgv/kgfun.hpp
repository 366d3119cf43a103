#ifndef KGV_KGFUN_HPP
#define KGV_KGFUN_HPP

#include <cmath>

#include "kgv/errors.hpp"
#include "kgv/interval.hpp"

// Function library for the Klein-Gordon bilinear estimates, in three
// coordinate systems:
//   xi     the frequency itself (finite reals only),
//   s      the normalized coordinate s = xi / sqrt(1 + xi^2) in [-1, 1],
//          with s = +-1 standing for xi = +-infinity,
//   theta  the angle with s = sin(theta), used by the certifier.
// Every operation comes in a point (double) and a rigorous (Interval)
// flavor computed from the same formula; the rigorous result contains the
// point result up to point-evaluation roundoff (property-tested).

namespace kgv {

// Normalized coordinate, |s| <= 1; +-1 encodes xi = +-infinity.
struct NormalizedCoord {
  double s;
  explicit NormalizedCoord(double value) : s(value) {
    if (!(std::fabs(value) <= 1.0)) throw InvalidParameter("normalized coordinate outside [-1, 1]");
  }
  bool at_infinity() const { return s == 1.0 || s == -1.0; }
};

// Deformation parameter for the sigma scale. Certifiable range is [1, 2];
// values in (0, 1) are admitted only for the blowup experiments and are
// flagged non-certifiable.
class AlphaParam {
 public:
  static AlphaParam certifiable(double a) {
    if (!(a >= 1.0 && a <= 2.0)) throw InvalidParameter("alpha outside [1, 2]");
    return AlphaParam(a, true);
  }
  static AlphaParam experimental(double a) {
    if (!(a > 0.0 && a <= 2.0)) throw InvalidParameter("alpha outside (0, 2]");
    return AlphaParam(a, a >= 1.0);
  }
  double value() const { return a_; }
  bool is_certifiable() const { return certifiable_; }

 private:
  AlphaParam(double a, bool c) : a_(a), certifiable_(c) {}
  double a_;
  bool certifiable_;
};

// --- coordinate maps -------------------------------------------------------

// s = xi / sqrt(1 + xi^2); strictly increasing, odd.
double to_s(double xi);
Interval to_s(Interval xi);

// inverse map; undefined at s = +-1 (PoleAtUnitCircle).
double to_xi(double s);
Interval to_xi(Interval s);

// --- the core quantities ---------------------------------------------------

// J = |s1 - s2| with s_i = to_s(xi_i); bounded by 2.
double jacobian(double xi1, double xi2);
Interval jacobian(Interval xi1, Interval xi2);
double jacobian_s(double s1, double s2);
Interval jacobian_s(Interval s1, Interval s2);

// J through the difference-quotient identity
//   J = |xi1^2 - xi2^2| / (|xi1 r2 + xi2 r1| r1 r2),   r_i = sqrt(1 + xi_i^2),
// cancellation-free for same-sign arguments near the diagonal; falls back to
// the direct form when the signs differ.
double jacobian_stable(double xi1, double xi2);

// chordal distance chi = |xi1 - xi2| / (r1 r2); bounded by 1.
double chordal(double xi1, double xi2);
Interval chordal(Interval xi1, Interval xi2);
// chi in s-coordinates (valid at the infinite endpoints s = +-1)
double chordal_s(double s1, double s2);
Interval chordal_s(Interval s1, Interval s2);

// sigma_alpha = |xi1 - xi2|^alpha / ((1+xi1^2)(1+xi2^2))^(1/2 + alpha/4)
double sigma(const AlphaParam& alpha, double xi1, double xi2);
Interval sigma(const AlphaParam& alpha, Interval xi1, Interval xi2);
// factored s-form chi^alpha * ((1-s1^2)(1-s2^2))^((2-alpha)/4); the damping
// exponent is 0 at alpha = 2 and 0^0 := 1, so sigma_2 = chi^2 at s = +-1.
double sigma_s(const AlphaParam& alpha, double s1, double s2);
Interval sigma_s(const AlphaParam& alpha, Interval s1, Interval s2);

// --- the two bound weights --------------------------------------------------

// (1+xi1^2)^(3/4) (1+xi2^2)^(3/4) / |xi2 - xi1|; equals 1/sigma_1.
double weight_A(double xi1, double xi2);
Interval weight_A(Interval xi1, Interval xi2);

// (1 - (1 + xi1 xi2) / (r1 r2))^(-1), evaluated through the exact identity
//   1 - (1 + xi1 xi2)/(r1 r2) = (xi1 - xi2)^2 / (r1 r2 (r1 r2 + 1 + xi1 xi2)),
// which removes the diagonal cancellation.
double weight_1(double xi1, double xi2);
Interval weight_1(Interval xi1, Interval xi2);
// s-form; denominator 1 - s1 s2 - c1 c2 with c = sqrt(1 - s^2), switched to
// the compensated 2 sin^2((theta1-theta2)/2) evaluation for |s1 - s2| < 0.05.
double weight_1_s(double s1, double s2);
Interval weight_1_s(Interval s1, Interval s2);

// --- auxiliary functions behind the two convexity proofs -------------------

// E2 family: f(x) = q1^(3/4) x qx^(1/4) - xi1 q1^(1/4) qx^(3/4) - (x - xi1)
// with q1 = xi1^2+1, qx = x^2+1; f(xi1) = f'(xi1) = 0 and f'' >= 0 for x >= xi1.
double aux_e2(double x, double xi1);
double aux_e2_d1(double x, double xi1);
double aux_e2_d2(double x, double xi1);
Interval aux_e2(Interval x, Interval xi1);
Interval aux_e2_d1(Interval x, Interval xi1);
Interval aux_e2_d2(Interval x, Interval xi1);

// E5 family: f(x) = -sqrt(q1) sqrt(qx) - xi1 sqrt(qx) + sqrt(q1) x + xi1 x + 1;
// f(xi1) = 0, f'(xi1) = 1/sqrt(q1), f'' <= 0 everywhere.
double aux_e5(double x, double xi1);
double aux_e5_d1(double x, double xi1);
double aux_e5_d2(double x, double xi1);
Interval aux_e5(Interval x, Interval xi1);
Interval aux_e5_d1(Interval x, Interval xi1);
Interval aux_e5_d2(Interval x, Interval xi1);

// Derivative at the seed point for the optimality construction:
// C (1+xi1^2)^(2a - 3/2) - 1, defined for 1/2 < a < 3/4, C >= 1.
double prop_seed_derivative(double xi1, double C, double a);
Interval prop_seed_derivative(Interval xi1, double C, double a);

}  // namespace kgv

#endif  // KGV_KGFUN_HPP
