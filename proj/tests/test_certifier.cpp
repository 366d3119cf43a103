#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <variant>

#include "kgv/certifier.hpp"
#include "kgv/kgfun.hpp"
#include "kgv/rng.hpp"
#include "oracle.hpp"

using namespace kgv;
using kgv_test::rel_close;

namespace {

Certificate expect_certificate(CertifyResult&& result) {
  REQUIRE(std::holds_alternative<Certificate>(result));
  return std::get<Certificate>(std::move(result));
}

CertFailure expect_failure(CertifyResult&& result) {
  REQUIRE(std::holds_alternative<CertFailure>(result));
  return std::get<CertFailure>(std::move(result));
}

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "kgv_certifier_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("validate_reformulation passes for all three families") {
  for (Family f : {Family::E2, Family::E5, Family::Elem2}) {
    InequalityTarget target = make_target(f);
    ReformulationReport report = validate_reformulation(target, 100000);
    CHECK(report.pass);
    CHECK(report.max_rel_discrepancy < 1e-10);
    CHECK(report.min_removed_factor >= 0.0);
  }
  // control constants keep the factorization identity too
  validate_reformulation(make_target(Family::E2, 0.99), 20000);
  validate_reformulation(make_target(Family::Elem2, 1.9), 20000);
}

TEST_CASE("corrupted factored form is rejected") {
  InequalityTarget bad = make_target(Family::E2);
  bad.corrupt_factored_for_test();
  CHECK_THROWS_AS(validate_reformulation(bad, 1000), ReformulationMismatch);
}

TEST_CASE("certify E2, E5, Elem2 at the sharp constants") {
  for (Family f : {Family::E2, Family::E5, Family::Elem2}) {
    CertifyConfig config;
    config.workers = 2;
    Certificate cert = expect_certificate(certify(make_target(f), config));
    CHECK(cert.boxes.size() >= 1);
    CHECK(cert.box_count <= 10'000'000);
    for (const auto& b : cert.boxes) CHECK(b.bound_lo >= 0.0);
    CHECK(replay(cert));
  }
}

TEST_CASE("true non-sharp constants certify too") {
  // weaker claims on the true side of the sharp constant stay sign-evident
  for (auto [family, constant] : {std::pair{Family::E2, 1.5}, {Family::E5, 0.8},
                                  {Family::Elem2, 2.5}}) {
    Certificate cert = expect_certificate(certify(make_target(family, constant)));
    CHECK(cert.boxes.size() >= 1);
    CHECK(replay(cert));
  }
}

TEST_CASE("certificate statuses partition by the equality set") {
  Certificate cert = expect_certificate(certify(make_target(Family::E2)));
  long boundary = 0;
  for (const auto& b : cert.boxes) {
    if (b.status == BoxStatus::boundary_equality_verified) {
      CHECK(b.bound_lo == 0.0);
      ++boundary;
    } else {
      CHECK(b.bound_lo > 0.0);
    }
  }
  CHECK(boundary > 0);  // diagonal boxes touch the equality set
  CHECK(boundary < static_cast<long>(cert.boxes.size()));
}

TEST_CASE("certificates are deterministic across runs and worker counts") {
  CertifyConfig one;
  one.workers = 1;
  CertifyConfig four;
  four.workers = 4;
  Certificate a = expect_certificate(certify(make_target(Family::Elem2), one));
  Certificate b = expect_certificate(certify(make_target(Family::Elem2), four));
  REQUIRE(a.boxes.size() == b.boxes.size());
  for (std::size_t i = 0; i < a.boxes.size(); ++i) {
    CHECK(a.boxes[i].box.t1.lo() == b.boxes[i].box.t1.lo());
    CHECK(a.boxes[i].box.t1.hi() == b.boxes[i].box.t1.hi());
    CHECK(a.boxes[i].box.t2.lo() == b.boxes[i].box.t2.lo());
    CHECK(a.boxes[i].box.t2.hi() == b.boxes[i].box.t2.hi());
    CHECK(a.boxes[i].bound_lo == b.boxes[i].bound_lo);
  }
}

TEST_CASE("negative control: E2 with constant 0.99 fails near the origin diagonal") {
  CertFailure fail = expect_failure(certify(make_target(Family::E2, 0.99)));
  // extremizing regime: xi2 -> xi1 = 0, i.e. theta near (0, 0) on the diagonal
  double c1 = midpoint(fail.suspect.t1);
  double c2 = midpoint(fail.suspect.t2);
  CHECK(std::fabs(c1) < 0.5);
  CHECK(std::fabs(c2) < 0.5);
  CHECK(std::fabs(c2 - c1) < 0.5);
  CHECK(fail.bound.lo() < 0.0);
}

TEST_CASE("negative control: Elem2 with constant 1.9 fails in the same-sign far field") {
  CertFailure fail = expect_failure(certify(make_target(Family::Elem2, 1.9)));
  // extremizing regime: xi2 >> xi1 -> +inf, i.e. theta1, theta2 near pi/2
  // (certified domain is symmetric, so the mirrored corner is equivalent)
  double c1 = std::fabs(midpoint(fail.suspect.t1));
  double c2 = std::fabs(midpoint(fail.suspect.t2));
  CHECK(c1 > 1.0);
  CHECK(c2 > 1.0);
  CHECK(fail.bound.lo() < 0.0);
}

TEST_CASE("sign-evident bounds really hold: sampled soundness of certificates") {
  Certificate cert = expect_certificate(certify(make_target(Family::E2)));
  InequalityTarget target = make_target(Family::E2);
  Rng rng(31);
  const double hp = 1.5707963267948966;
  for (int i = 0; i < 1000000; ++i) {
    double a = rng.uniform(-hp, hp), b = rng.uniform(-hp, hp);
    double th1 = std::min(a, b), th2 = std::max(a, b);
    double raw = target.margin_raw(th1, th2);
    double scale = std::fabs(std::sin(th2)) + std::fabs(std::sin(th1)) + 1.0;
    CHECK(raw >= -1e-15 * scale);
  }
  CHECK(cert.boxes.size() > 0);
}

TEST_CASE("theta-form margins agree with the s-form function library") {
  // the certified margins are trig expressions in theta; they must be the
  // same quantities the function library computes through s = sin(theta).
  // Sampling stays off the poles: recovering sqrt(1 - s^2) from a rounded s
  // loses digits like 1/cos^2(theta) there, which is a property of the
  // coordinates, not of either evaluation route.
  Rng rng(34);
  AlphaParam a1 = AlphaParam::certifiable(1.0);
  AlphaParam a2 = AlphaParam::certifiable(2.0);
  InequalityTarget e2 = make_target(Family::E2);
  InequalityTarget e5 = make_target(Family::E5);
  InequalityTarget elem2 = make_target(Family::Elem2);
  for (int i = 0; i < 100000; ++i) {
    double u = rng.uniform(-1.45, 1.45), v = rng.uniform(-1.45, 1.45);
    double th1 = std::min(u, v), th2 = std::max(u, v);
    double s1 = std::sin(th1), s2 = std::sin(th2);
    double jac = jacobian_s(s1, s2);
    double scale = jac + 1.0;
    CHECK(std::fabs(e2.margin_raw(th1, th2) - (jac - sigma_s(a1, s1, s2))) <= 1e-12 * scale);
    CHECK(std::fabs(elem2.margin_raw(th1, th2) - (2.0 * jac - sigma_s(a2, s1, s2))) <=
          1e-12 * (scale + sigma_s(a2, s1, s2)));
    double c1 = std::sqrt(std::max(0.0, 1.0 - s1 * s1));
    double c2 = std::sqrt(std::max(0.0, 1.0 - s2 * s2));
    double e5_rhs = 1.0 - s1 * s2 - c1 * c2;
    CHECK(std::fabs(e5.margin_raw(th1, th2) - (jac - e5_rhs)) <= 1e-9 * (scale + std::fabs(e5_rhs)));
  }
}

TEST_CASE("negative control: E5 above constant 1 fails at the anti-diagonal corner") {
  // J = 2 meets the angular distance 2 only as xi1 -> -inf, xi2 -> +inf
  CertFailure fail = expect_failure(certify(make_target(Family::E5, 1.01)));
  CHECK(midpoint(fail.suspect.t1) < -1.0);
  CHECK(midpoint(fail.suspect.t2) > 1.0);
}

TEST_CASE("factored interval bounds contain the factored point values") {
  Rng rng(32);
  const double hp = 1.5707963267948966;
  for (Family f : {Family::E2, Family::E5, Family::Elem2}) {
    InequalityTarget target = make_target(f);
    for (int i = 0; i < 20000; ++i) {
      double a = rng.uniform(-hp, hp), b = rng.uniform(-hp, hp);
      double th1 = std::min(a, b), th2 = std::max(a, b);
      double w = rng.uniform(0.0, 0.05);
      AngleBox box{Interval(th1, std::min(th1 + w, hp)), Interval(th2, std::min(th2 + w, hp)), 0};
      if (box.t2.hi() <= box.t1.lo()) continue;
      Interval bound = target.factored_bound(box);
      // the box's factored values at admissible points lie inside the bound
      double p1 = midpoint(box.t1), p2 = std::max(midpoint(box.t2), p1);
      double value = target.margin_factored(p1, p2);
      CHECK(value >= bound.lo() - 1e-12);
      CHECK(value <= bound.hi() + 1e-12);
    }
  }
}

TEST_CASE("factored bounds are vacuous below the diagonal") {
  InequalityTarget target = make_target(Family::E2);
  AngleBox below{Interval(0.5, 0.6), Interval(0.1, 0.2), 2};
  Interval b = target.factored_bound(below);
  CHECK(b.lo() == 0.0);
  CHECK(b.hi() == 0.0);
}

TEST_CASE("subdivision progress: children strictly narrower") {
  AngleBox parent = root_box();
  auto [l1, r1] = bisect(parent.t1);
  auto [l2, r2] = bisect(parent.t2);
  CHECK(width(l1) < width(parent.t1));
  CHECK(width(r1) < width(parent.t1));
  CHECK(width(l2) < width(parent.t2));
  CHECK(width(r2) < width(parent.t2));
}

TEST_CASE("budget exhaustion raises") {
  CertifyConfig tiny;
  tiny.box_budget = 3;  // the pre-split alone exceeds this
  CHECK_THROWS_AS(certify(make_target(Family::E2), tiny), BudgetExhausted);
}

TEST_CASE("anti-diagonal sweep: sigma_alpha(-xi, xi) <= 2^(alpha-1) J(-xi, xi)") {
  for (double alpha : {1.0, 1.5, 2.0}) {
    AlphaParam a = AlphaParam::experimental(alpha);
    double constant = std::pow(2.0, alpha - 1.0);
    for (int k = 0; k <= 400; ++k) {
      double theta = k * (1.5707963267948966 / 400.0);
      double s2 = std::sin(theta);  // sweeps xi2 from 0 to infinity (s = 1)
      double lhs = sigma_s(a, -s2, s2);
      double rhs = constant * jacobian_s(-s2, s2);
      CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("elementary two-variable inequality and its reduction") {
  Rng rng(33);
  for (int i = 0; i < 100000; ++i) {
    // |A+B| / |A sqrt(1+B^2) + B sqrt(1+A^2)| <= 1 for A, B >= 0
    double A = std::exp(rng.uniform(-6.0, 6.0));
    double B = std::exp(rng.uniform(-6.0, 6.0));
    double num = A + B;
    double den = A * std::sqrt(1.0 + B * B) + B * std::sqrt(1.0 + A * A);
    CHECK(num <= den * (1.0 + 1e-12));

    // s^2 b^2 + t^2 / b^2 <= s^2 + t^2 whenever 1 <= b^2 <= t^2/s^2
    double s = std::exp(rng.uniform(-3.0, 3.0)) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    double t_ratio = 1.0 + std::exp(rng.uniform(-3.0, 3.0));
    double t = s * t_ratio * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    double b2 = rng.uniform(1.0, (t * t) / (s * s));
    double lhs = s * s * b2 + t * t / b2;
    CHECK(lhs <= (s * s + t * t) * (1.0 + 1e-12));
  }
}

TEST_CASE("interpolation composition") {
  Certificate e2 = expect_certificate(certify(make_target(Family::E2)));
  Certificate elem2 = expect_certificate(certify(make_target(Family::Elem2)));

  for (double alpha : {1.1, 1.25, 1.5, 1.75, 1.9}) {
    InterpolatedConclusion c = compose_interpolation(e2, elem2, alpha, 100000);
    CHECK(c.violations == 0);
    CHECK(rel_close(c.constant, std::pow(2.0, alpha - 1.0), 1e-15));
    CHECK(c.max_ratio <= 1.0 + 1e-12);
    CHECK(c.spot_samples == 100000);
  }

  InterpolatedConclusion endpoint = compose_interpolation(e2, elem2, 1.0, 10000);
  CHECK(endpoint.constant == 1.0);  // identical statement to the E2 certificate
  CHECK(endpoint.violations == 0);

  CHECK_THROWS_AS(compose_interpolation(e2, elem2, 2.5), InvalidParameter);
  CHECK_THROWS_AS(compose_interpolation(elem2, e2, 1.5), InvalidParameter);
  Certificate ctrl = expect_certificate(certify(make_target(Family::E5)));
  CHECK_THROWS_AS(compose_interpolation(ctrl, elem2, 1.5), InvalidParameter);
}

TEST_CASE("certificate round-trip and replay faults") {
  Certificate cert = expect_certificate(certify(make_target(Family::E5)));
  auto path = temp_file("cert_e5.json");
  save_certificate(cert, path);
  Certificate loaded = load_certificate(path);
  CHECK(loaded.family == cert.family);
  CHECK(loaded.constant == cert.constant);
  REQUIRE(loaded.boxes.size() == cert.boxes.size());
  for (std::size_t i = 0; i < cert.boxes.size(); ++i) {
    CHECK(loaded.boxes[i].box.t1.lo() == cert.boxes[i].box.t1.lo());
    CHECK(loaded.boxes[i].box.t2.hi() == cert.boxes[i].box.t2.hi());
    CHECK(loaded.boxes[i].bound_lo == cert.boxes[i].bound_lo);
    CHECK(loaded.boxes[i].status == cert.boxes[i].status);
  }
  CHECK(replay(loaded));

  SUBCASE("deleting a box leaves a gap") {
    Certificate tampered = loaded;
    tampered.boxes.erase(tampered.boxes.begin() + 3);
    CHECK_THROWS_AS(replay(tampered), TileGap);
  }
  SUBCASE("duplicating a box overlaps") {
    Certificate tampered = loaded;
    tampered.boxes.push_back(tampered.boxes.front());
    CHECK_THROWS_AS(replay(tampered), TileOverlap);
  }
  SUBCASE("a box outside the bisection tree is rejected") {
    Certificate tampered = loaded;
    AngleBox alien{Interval(0.01, 0.02), Interval(0.03, 0.05), 1};
    tampered.boxes.push_back({alien, 0.0, BoxStatus::verified});
    CHECK_THROWS_AS(replay(tampered), TileOverlap);
  }
  SUBCASE("flipping a bound negative is caught") {
    Certificate tampered = loaded;
    tampered.boxes[1].bound_lo = -1e-3;
    CHECK_THROWS_AS(replay(tampered), NegativeBound);
  }
  SUBCASE("malformed JSON is a format error") {
    auto bad_path = temp_file("cert_bad.json");
    std::ofstream out(bad_path);
    out << "{\"target\": 12}";
    out.close();
    CHECK_THROWS_AS(load_certificate(bad_path), CertificateFormat);
  }
}

TEST_CASE("target name round-trip") {
  for (Family f : {Family::E2, Family::E5, Family::Elem2})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_THROWS_AS(family_from_name("bogus"), InvalidParameter);
}
