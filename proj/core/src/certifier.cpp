#include "kgv/certifier.hpp"

#include <algorithm>
#include <chrono>
#include <cfloat>
#include <cmath>

#include "kgv/kgfun.hpp"
#include "kgv/parallel.hpp"
#include "kgv/rng.hpp"

namespace kgv {

std::string family_name(Family f) {
  switch (f) {
    case Family::E2: return "E2";
    case Family::E5: return "E5";
    case Family::Elem2: return "Elem2";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "E2") return Family::E2;
  if (name == "E5") return Family::E5;
  if (name == "Elem2") return Family::Elem2;
  throw InvalidParameter("unknown target family: " + name);
}

double box_width(const AngleBox& b) { return std::max(width(b.t1), width(b.t2)); }

AngleBox root_box() {
  double h = half_pi_interval().hi();
  return AngleBox{Interval(-h, h), Interval(-h, h), 0};
}

namespace {

double sharp_constant(Family f) {
  switch (f) {
    case Family::E2: return 1.0;
    case Family::E5: return 1.0;
    case Family::Elem2: return 2.0;
  }
  return 1.0;
}

// clamped primitives; each intersection is justified by the true range of
// the subexpression over theta in [-pi/2, pi/2], theta2 >= theta1
Interval clamp01(Interval x) { return intersect(x, Interval(0.0, 1.0)); }

Interval sin01(Interval arg) {
  Interval a = intersect(arg, Interval(0.0, half_pi_interval().hi()));
  return clamp01(sin_enclosure(a));
}

Interval cos01(Interval arg) { return clamp01(cos_enclosure(arg)); }

struct ThetaIntervals {
  Interval half_delta;  // (theta2 - theta1)/2 in [0, pi/2]
  Interval half_sigma;  // (theta1 + theta2)/2 in [-pi/2, pi/2]
  Interval u;           // (pi + 2 theta1)/4 in [0, pi/2]
  Interval v;           // (pi - 2 theta2)/4 in [0, pi/2]
};

ThetaIntervals split_angles(const AngleBox& box) {
  Interval pi = pi_interval();
  Interval hp = half_pi_interval();
  ThetaIntervals out;
  out.half_delta = mul(intersect(sub(box.t2, box.t1), Interval(0.0, pi.hi())), Interval(0.5));
  out.half_sigma = mul(intersect(add(box.t1, box.t2), Interval(-pi.hi(), pi.hi())), Interval(0.5));
  out.u = intersect(mul(add(pi, mul(box.t1, Interval(2.0))), Interval(0.25)),
                    Interval(0.0, hp.hi()));
  out.v = intersect(mul(sub(pi, mul(box.t2, Interval(2.0))), Interval(0.25)),
                    Interval(0.0, hp.hi()));
  return out;
}

}  // namespace

InequalityTarget::InequalityTarget(Family family, double constant)
    : family_(family), constant_(constant) {
  if (!(constant > 0.0) || !std::isfinite(constant))
    throw InvalidParameter("target constant must be positive and finite");
  analysis_.push_back("diagonal factor 2*sin((theta2-theta1)/2) removed");
  switch (family_) {
    case Family::E2:
      analysis_.push_back("factored margin c^2*b - a*(a+b-1), a = cos^2((theta2-theta1)/2), b = cos^2((theta1+theta2)/2)");
      if (constant_ >= 1.0)
        analysis_.push_back("sign-evident split (c^2-1)*b + (1-a)*(a+b)");
      break;
    case Family::E5:
      analysis_.push_back("factored margin cos((theta1+theta2)/2) - c*sin((theta2-theta1)/2)");
      if (constant_ <= 1.0)
        analysis_.push_back("product-to-sum 2*sin((pi+2*theta1)/4)*sin((pi-2*theta2)/4) + (1-c)*sin(d/2), arguments clamped to [0, pi/2]");
      break;
    case Family::Elem2:
      analysis_.push_back("factored margin c*cos((theta1+theta2)/2) - 2*sin(d/2)*cos^2(d/2), upper-triangle orientation by swap symmetry");
      if (constant_ >= 2.0)
        analysis_.push_back("sign-evident sum 4*sin((pi+2*theta1)/4)*sin((pi-2*theta2)/4) + 2*sin^3(d/2) + (c-2)*cos((theta1+theta2)/2)");
      break;
  }
}

bool InequalityTarget::canonical() const { return constant_ == sharp_constant(family_); }

double InequalityTarget::margin_raw(double th1, double th2) const {
  const double c = constant_;
  const double jac = std::sin(th2) - std::sin(th1);
  const double delta = th2 - th1;
  switch (family_) {
    case Family::E2: {
      double sigma1 = std::sin(delta) * std::sqrt(std::max(0.0, std::cos(th1) * std::cos(th2)));
      return c * jac - sigma1;
    }
    case Family::E5:
      return jac - c * (1.0 - std::cos(delta));
    case Family::Elem2: {
      double s = std::sin(delta);
      return c * jac - s * s;
    }
  }
  return 0.0;
}

double InequalityTarget::margin_factored(double th1, double th2) const {
  const double c = constant_;
  const double hd = 0.5 * (th2 - th1);
  const double hs = 0.5 * (th1 + th2);
  double value = 0.0;
  switch (family_) {
    case Family::E2: {
      double a = std::cos(hd) * std::cos(hd);
      double b = std::cos(hs) * std::cos(hs);
      value = c * c * b - a * (a + b - 1.0);
      break;
    }
    case Family::E5:
      value = std::cos(hs) - c * std::sin(hd);
      break;
    case Family::Elem2: {
      double cd = std::cos(hd);
      value = c * std::cos(hs) - 2.0 * std::sin(hd) * cd * cd;
      break;
    }
  }
  if (corrupted_) value *= 1.001;
  return value;
}

double InequalityTarget::margin_scale(double th1, double th2) const {
  const double c = constant_;
  const double jac = std::fabs(std::sin(th2) - std::sin(th1));
  const double delta = th2 - th1;
  switch (family_) {
    case Family::E2:
      return c * jac + std::fabs(std::sin(delta)) * std::sqrt(std::max(0.0, std::cos(th1) * std::cos(th2)));
    case Family::E5:
      return jac + c * std::fabs(1.0 - std::cos(delta));
    case Family::Elem2: {
      double s = std::sin(delta);
      return c * jac + s * s;
    }
  }
  return 1.0;
}

double InequalityTarget::removed_factor(double th1, double th2) const {
  const double c = constant_;
  const double hd = 0.5 * (th2 - th1);
  const double hs = 0.5 * (th1 + th2);
  switch (family_) {
    case Family::E2: {
      double a = std::cos(hd) * std::cos(hd);
      double b = std::cos(hs) * std::cos(hs);
      double cc = std::max(0.0, a + b - 1.0);  // = cos(th1) cos(th2)
      double denom = c * std::sqrt(b) + std::sqrt(a * cc);
      return 2.0 * std::sin(hd) / denom;
    }
    case Family::E5:
    case Family::Elem2:
      return 2.0 * std::sin(hd);
  }
  return 0.0;
}

Interval InequalityTarget::factored_bound(const AngleBox& box) const {
  // a box with no admissible points (strictly below the diagonal) is
  // vacuously verified; keeps replay well-defined on arbitrary inputs
  if (box.t2.hi() < box.t1.lo()) return Interval(0.0);
  const ThetaIntervals t = split_angles(box);
  const Interval c(constant_);
  Interval m;
  switch (family_) {
    case Family::E2: {
      Interval a = sqr(cos01(t.half_delta));
      Interval b = sqr(cos01(t.half_sigma));
      if (constant_ >= 1.0) {
        // c^2 b - a(a+b-1) = (c^2-1) b + (1-a)(a+b): every factor nonnegative
        Interval slack = mul(sub(sqr(c), Interval(1.0)), b);
        m = add(slack, mul(sub(Interval(1.0), a), add(a, b)));
      } else {
        m = sub(mul(sqr(c), b), mul(a, sub(add(a, b), Interval(1.0))));
      }
      break;
    }
    case Family::E5: {
      if (constant_ <= 1.0) {
        // cos(S/2) - c sin(d/2) = 2 sin(u) sin(v) + (1-c) sin(d/2)
        Interval base = mul(Interval(2.0), mul(sin01(t.u), sin01(t.v)));
        m = add(base, mul(sub(Interval(1.0), c), sin01(t.half_delta)));
      } else {
        m = sub(cos01(t.half_sigma), mul(c, sin01(t.half_delta)));
      }
      break;
    }
    case Family::Elem2: {
      if (constant_ >= 2.0) {
        // c cos(S/2) - 2 sin(d/2) cos^2(d/2)
        //   = 4 sin(u) sin(v) + 2 sin^3(d/2) + (c-2) cos(S/2)
        Interval sd = sin01(t.half_delta);
        Interval base = add(mul(Interval(4.0), mul(sin01(t.u), sin01(t.v))),
                            mul(Interval(2.0), mul(sd, sqr(sd))));
        m = add(base, mul(sub(c, Interval(2.0)), cos01(t.half_sigma)));
      } else {
        m = sub(mul(c, cos01(t.half_sigma)),
                mul(Interval(2.0), mul(sin01(t.half_delta), sqr(cos01(t.half_delta)))));
      }
      break;
    }
  }
  if (corrupted_) m = mul(m, Interval(1.001));
  return m;
}

InequalityTarget make_target(Family family) { return InequalityTarget(family, sharp_constant(family)); }

InequalityTarget make_target(Family family, double constant) {
  return InequalityTarget(family, constant);
}

ReformulationReport validate_reformulation(const InequalityTarget& target, long samples,
                                           std::uint64_t seed) {
  Rng rng(seed);
  ReformulationReport report;
  report.samples = samples;
  report.min_removed_factor = DBL_MAX;
  const double hp = half_pi_interval().lo();
  long done = 0;
  while (done < samples) {
    double a = rng.uniform(-hp + 1e-3, hp - 1e-3);
    double b = rng.uniform(-hp + 1e-3, hp - 1e-3);
    double th1 = std::min(a, b);
    double th2 = std::max(a, b);
    if (th2 - th1 < 1e-6) continue;
    ++done;
    double raw = target.margin_raw(th1, th2);
    double rf = target.removed_factor(th1, th2);
    double fact = target.margin_factored(th1, th2);
    double recombined = rf * fact;
    // scale of the terms the margin subtracts; the margin itself vanishes on
    // the equality set and cannot anchor a relative comparison there
    double scale = std::max(target.margin_scale(th1, th2), DBL_MIN);
    double rel = std::fabs(raw - recombined) / scale;
    report.max_rel_discrepancy = std::max(report.max_rel_discrepancy, rel);
    report.min_removed_factor = std::min(report.min_removed_factor, rf);
  }
  report.pass = report.max_rel_discrepancy <= 1e-10 && report.min_removed_factor >= 0.0;
  if (!report.pass)
    throw ReformulationMismatch("target " + target.name() +
                                ": max rel discrepancy " + std::to_string(report.max_rel_discrepancy) +
                                ", min removed factor " + std::to_string(report.min_removed_factor));
  return report;
}

namespace {

bool below_diagonal(const AngleBox& b) { return b.t2.hi() <= b.t1.lo(); }

void push_children(const AngleBox& parent, DomainTag domain, std::vector<AngleBox>& out) {
  auto [l1, r1] = bisect(parent.t1);
  auto [l2, r2] = bisect(parent.t2);
  const Interval t1s[2] = {l1, r1};
  const Interval t2s[2] = {l2, r2};
  for (const auto& p2 : t2s)
    for (const auto& p1 : t1s) {
      AngleBox child{p1, p2, parent.depth + 1};
      if (domain == DomainTag::upper_triangle && below_diagonal(child)) continue;
      out.push_back(child);
    }
}

struct Candidate {
  AngleBox box;
  Interval bound;
  bool valid = false;
};

bool earlier_suspect(const Candidate& a, const Candidate& b, bool refuted) {
  double ka = refuted ? a.bound.hi() : a.bound.lo();
  double kb = refuted ? b.bound.hi() : b.bound.lo();
  if (ka != kb) return ka < kb;
  if (a.box.t1.lo() != b.box.t1.lo()) return a.box.t1.lo() < b.box.t1.lo();
  return a.box.t2.lo() < b.box.t2.lo();
}

}  // namespace

CertifyResult certify(const InequalityTarget& target, const CertifyConfig& config) {
  validate_reformulation(target, config.validate_samples, config.seed);

  const auto t_start = std::chrono::steady_clock::now();
  const DomainTag domain = target.domain();

  std::vector<AngleBox> frontier{root_box()};
  for (int d = 0; d < config.initial_depth; ++d) {
    std::vector<AngleBox> next;
    next.reserve(frontier.size() * 4);
    for (const auto& b : frontier) push_children(b, domain, next);
    frontier.swap(next);
  }

  std::vector<CertifiedBox> leaves;
  long processed = 0;

  while (!frontier.empty()) {
    if (processed + static_cast<long>(frontier.size()) > config.box_budget)
      throw BudgetExhausted("box budget " + std::to_string(config.box_budget) + " exceeded");
    processed += static_cast<long>(frontier.size());

    std::vector<Interval> bounds(frontier.size(), Interval(0.0));
    parallel_for(frontier.size(), config.workers,
                 [&](std::size_t i) { bounds[i] = target.factored_bound(frontier[i]); });

    std::vector<AngleBox> next;
    Candidate refuted, straddled;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const AngleBox& box = frontier[i];
      const Interval bound = bounds[i];
      if (bound.lo() >= 0.0) {
        leaves.push_back({box, bound.lo(),
                          bound.lo() == 0.0 ? BoxStatus::boundary_equality_verified
                                            : BoxStatus::verified});
        continue;
      }
      Candidate cand{box, bound, true};
      if (bound.hi() < 0.0) {
        if (!refuted.valid || earlier_suspect(cand, refuted, true)) refuted = cand;
        continue;
      }
      if (box_width(box) <= config.min_width || box.depth >= config.max_depth) {
        if (!straddled.valid || earlier_suspect(cand, straddled, false)) straddled = cand;
        continue;
      }
      push_children(box, domain, next);
    }

    if (refuted.valid)
      return CertFailure{refuted.box, refuted.bound, true, processed};
    if (straddled.valid)
      return CertFailure{straddled.box, straddled.bound, false, processed};
    frontier.swap(next);
  }

  std::sort(leaves.begin(), leaves.end(), [](const CertifiedBox& a, const CertifiedBox& b) {
    if (a.box.t1.lo() != b.box.t1.lo()) return a.box.t1.lo() < b.box.t1.lo();
    if (a.box.t2.lo() != b.box.t2.lo()) return a.box.t2.lo() < b.box.t2.lo();
    if (a.box.t1.hi() != b.box.t1.hi()) return a.box.t1.hi() < b.box.t1.hi();
    return a.box.t2.hi() < b.box.t2.hi();
  });

  Certificate cert;
  cert.family = target.family();
  cert.constant = target.constant();
  cert.domain = domain;
  cert.analysis = target.analysis();
  cert.config = config;
  cert.boxes = std::move(leaves);
  cert.box_count = processed;
  cert.walltime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t_start)
                         .count();
  return cert;
}

InterpolatedConclusion compose_interpolation(const Certificate& cert_e2,
                                             const Certificate& cert_elem2, double alpha,
                                             long spot_samples, std::uint64_t seed) {
  if (cert_e2.family != Family::E2 || cert_e2.constant != 1.0)
    throw InvalidParameter("first certificate must be E2 with constant 1");
  if (cert_elem2.family != Family::Elem2 || cert_elem2.constant != 2.0)
    throw InvalidParameter("second certificate must be Elem2 with constant 2");
  if (!(alpha >= 1.0 && alpha <= 2.0)) throw InvalidParameter("alpha outside [1, 2]");

  InterpolatedConclusion out;
  out.alpha = alpha;
  out.constant = std::pow(2.0, alpha - 1.0);
  out.seed = seed;
  out.statement = "sigma_alpha(xi1, xi2) <= 2^(alpha-1) * J(xi1, xi2) on R* x R* for alpha = " +
                  std::to_string(alpha) +
                  " (from the endpoint certificates via sigma_alpha = sigma_1^(2-alpha) * sigma_2^(alpha-1))";

  AlphaParam ap = AlphaParam::certifiable(alpha);
  Rng rng(seed);
  long done = 0;
  while (done < spot_samples) {
    double s1 = rng.uniform(-1.0, 1.0);
    double s2 = rng.uniform(-1.0, 1.0);
    std::uint64_t pick = rng.next_u64();
    if (pick % 100 == 0) s1 = (pick & 1) ? 1.0 : -1.0;  // exercise the infinite endpoints
    if (pick % 100 == 1) s2 = (pick & 2) ? 1.0 : -1.0;
    double j = jacobian_s(s1, s2);
    if (j == 0.0) continue;
    ++done;
    double lhs = sigma_s(ap, s1, s2);
    double rhs = out.constant * j;
    out.max_ratio = std::max(out.max_ratio, lhs / rhs);
    if (lhs > rhs * (1.0 + 1e-12) + 1e-300) ++out.violations;
  }
  out.spot_samples = done;
  return out;
}

}  // namespace kgv
