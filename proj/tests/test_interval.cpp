#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kgv/interval.hpp"
#include "kgv/rng.hpp"
#include "oracle.hpp"

using namespace kgv;
using kgv_test::bf;
using kgv_test::contains;

namespace {

// number of representable doubles strictly between lo and hi (capped)
int ulp_steps(double lo, double hi, int cap = 64) {
  int n = 0;
  double x = lo;
  while (x < hi && n <= cap) {
    x = detail::next_up(x);
    ++n;
  }
  return n;
}

double sample_point(Rng& rng, double scale) {
  double mag = std::exp(rng.uniform(-3.0, 3.0)) * scale;
  return (rng.uniform() < 0.5 ? -1.0 : 1.0) * mag * rng.uniform();
}

Interval sample_interval(Rng& rng, double scale) {
  double a = sample_point(rng, scale);
  double b = a + std::fabs(sample_point(rng, scale)) * rng.uniform();
  return Interval(std::min(a, b), std::max(a, b));
}

double pick_inside(Rng& rng, Interval x) {
  double v = x.lo() + rng.uniform() * (x.hi() - x.lo());
  return std::min(std::max(v, x.lo()), x.hi());
}

}  // namespace

TEST_CASE("arithmetic examples with exact endpoints") {
  Interval s = add(Interval(1, 2), Interval(3, 4));
  CHECK(s.lo() == 4.0);
  CHECK(s.hi() == 6.0);

  Interval p = mul(Interval(-1, 2), Interval(-3, 1));
  CHECK(p.lo() == -6.0);
  CHECK(p.hi() == 3.0);

  CHECK_THROWS_AS(div(Interval(1, 2), Interval(0, 1)), DivisionByZeroInterval);
  CHECK_THROWS_AS(div(Interval(1, 2), Interval(-1, 1)), DivisionByZeroInterval);

  Interval d = sub(Interval(1, 2), Interval(0.5, 1.5));
  CHECK(d.lo() == -0.5);
  CHECK(d.hi() == 1.5);

  CHECK(neg(Interval(-1, 2)).lo() == -2.0);
  CHECK(abs(Interval(-3, 1)).lo() == 0.0);
  CHECK(abs(Interval(-3, 1)).hi() == 3.0);
  CHECK(sqr(Interval(-3, 1)).lo() == 0.0);
  CHECK(sqr(Interval(-3, 1)).hi() == 9.0);
}

TEST_CASE("sqrt examples and domain policy") {
  Interval r = sqrt(Interval(4, 9));
  CHECK(r.lo() == 2.0);
  CHECK(r.hi() == 3.0);

  Interval s2 = sqrt(Interval(2, 2));
  CHECK(contains(s2, sqrt(bf(2.0))));
  CHECK(ulp_steps(s2.lo(), s2.hi()) <= 2);

  CHECK_THROWS_AS(sqrt(Interval(-1, 4), SqrtPolicy::strict), NegativeDomain);
  Interval clamped = sqrt(Interval(-1, 4));
  CHECK(clamped.lo() == 0.0);
  CHECK(clamped.hi() == 2.0);
  CHECK_THROWS_AS(sqrt(Interval(-4, -1)), NegativeDomain);
}

TEST_CASE("pow_rational examples") {
  Interval p = pow_rational(Interval(2, 2), Rational(3, 4));
  CHECK(contains(p, pow(bf(2.0), 0.75)));
  CHECK(ulp_steps(p.lo(), p.hi()) <= 4);

  Interval unit = pow_rational(Interval(0, 1), Rational(1, 2));
  CHECK(unit.lo() == 0.0);
  CHECK(unit.hi() == 1.0);

  for (Rational r : {Rational(3, 4), Rational(1, 2), Rational(7, 3), Rational(-2, 5)}) {
    Interval one = pow_rational(Interval(1, 1), r);
    CHECK(one.lo() == 1.0);
    CHECK(one.hi() == 1.0);
  }

  CHECK_THROWS_AS(pow_rational(Interval(-1, 2), Rational(1, 2)), NegativeDomain);
  CHECK(pow_rational(Interval(3, 3), Rational(0, 5)).lo() == 1.0);
  CHECK(pow_int(Interval(-2, 3), 2).lo() == 0.0);
  CHECK(pow_int(Interval(-2, 3), 2).hi() == 9.0);
  CHECK(pow_int(Interval(-2, -2), 3).hi() == -8.0);
}

TEST_CASE("trig enclosure examples") {
  Interval c0 = cos_enclosure(Interval(0, 0));
  CHECK(c0.lo() == 1.0);
  CHECK(c0.hi() == 1.0);

  Interval s0pi = sin_enclosure(Interval(0.0, std::numbers::pi));
  CHECK(s0pi.hi() == 1.0);  // interior maximum at pi/2
  CHECK(s0pi.lo() <= 0.0);
  CHECK(s0pi.lo() >= -1e-15);

  Interval s6 = sin_enclosure(Interval(std::numbers::pi / 6.0));
  CHECK(contains(s6, sin(bf(std::numbers::pi / 6.0))));
  CHECK(s6.contains(0.5));

  Interval cpi = cos_enclosure(Interval(std::numbers::pi, std::numbers::pi));
  CHECK(cpi.lo() == -1.0);  // enclosure of the true pi straddles the double

  CHECK_THROWS_AS(sin_enclosure(Interval(0.0, 7.0)), DomainTooWide);
}

TEST_CASE("bisect, width, midpoint") {
  auto [left, right] = bisect(Interval(0, 2));
  CHECK(left.lo() == 0.0);
  CHECK(left.hi() == 1.0);
  CHECK(right.lo() == 1.0);
  CHECK(right.hi() == 2.0);

  CHECK(width(Interval(-1, 3)) == 4.0);
  CHECK(midpoint(Interval(1, 2)) == 1.5);
  CHECK_THROWS_AS(bisect(Interval(1, 1)), ZeroWidth);

  Rng rng(7);
  for (int i = 0; i < 20000; ++i) {
    Interval x = sample_interval(rng, 1.0);
    if (!(width(x) > 0)) continue;
    auto [a, b] = bisect(x);
    CHECK(a.lo() == x.lo());
    CHECK(a.hi() == b.lo());
    CHECK(b.hi() == x.hi());
    // halves cover x and exceed half width by at most a rounding unit of the
    // midpoint's binade
    double m = a.hi();
    double unit = 2.0 * (detail::next_up(std::fabs(m)) - std::fabs(m)) + 5e-324;
    CHECK(width(a) <= 0.5 * width(x) + unit);
    CHECK(width(b) <= 0.5 * width(x) + unit);
  }
}

TEST_CASE("infinite endpoints are pass-through only") {
  double inf = std::numeric_limits<double>::infinity();
  Interval wide(0.0, inf);  // storable
  CHECK(wide.hi() == inf);
  CHECK_THROWS_AS(add(wide, Interval(1.0)), InfiniteEndpoint);
  // overflow saturates the affected endpoint outward
  Interval big(1e308, 1e308);
  Interval doubled = add(big, big);
  CHECK(doubled.hi() == inf);
  CHECK(doubled.lo() >= 1.7e308);
}

TEST_CASE("containment: randomized against the high-precision oracle") {
  Rng rng(0x1234abcd);
  const int kCases = 100000;

  long exercised_div = 0;
  for (int i = 0; i < kCases; ++i) {
    Interval x = sample_interval(rng, 1.0);
    Interval y = sample_interval(rng, 1.0);
    double px = pick_inside(rng, x);
    double py = pick_inside(rng, y);

    CHECK(contains(add(x, y), bf(px) + bf(py)));
    CHECK(contains(sub(x, y), bf(px) - bf(py)));
    CHECK(contains(mul(x, y), bf(px) * bf(py)));
    CHECK(contains(sqr(x), bf(px) * bf(px)));
    CHECK(contains(neg(x), -bf(px)));
    CHECK(contains(abs(x), abs(bf(px))));
    if (!y.contains_zero()) {
      ++exercised_div;
      CHECK(contains(div(x, y), bf(px) / bf(py)));
    }
  }
  CHECK(exercised_div > kCases / 4);
}

TEST_CASE("containment: sqrt, powers, exp, log") {
  Rng rng(0xfeed5eed);
  const int kCases = 100000;
  const Rational exps[] = {Rational(1, 2), Rational(1, 4), Rational(3, 4), Rational(3, 2),
                           Rational(2, 3), Rational(5, 8), Rational(-3, 4), Rational(3, 1)};
  for (int i = 0; i < kCases; ++i) {
    Interval x = abs(sample_interval(rng, 1.0));
    double px = pick_inside(rng, x);

    CHECK(contains(sqrt(x), sqrt(bf(px))));

    const Rational& p = exps[static_cast<std::size_t>(rng.next_u64() % 8)];
    if (p.num >= 0 || x.lo() > 0.0) {
      Interval powed = pow_rational(x, p);
      kgv::BigFloat truth = pow(bf(px), p.as_double());
      CHECK(contains(powed, truth));
    } else {
      CHECK_THROWS_AS(pow_rational(x, p), DivisionByZeroInterval);
    }

    double preal = rng.uniform(-2.0, 2.0);
    if (px > 0.0 && x.lo() > 0.0) {
      CHECK(contains(pow_real(x, preal), pow(bf(px), preal)));
      CHECK(contains(log_enclosure(x), log(bf(px))));
    }

    Interval small(std::fmod(x.lo(), 30.0), std::fmod(x.lo(), 30.0));
    CHECK(contains(exp_enclosure(small), exp(bf(small.lo()))));
  }
}

TEST_CASE("containment: sin and cos with interior extrema") {
  Rng rng(0x0c05f1fe);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < 100000; ++i) {
    double a = rng.uniform(-two_pi, two_pi);
    double b = rng.uniform(-two_pi, two_pi);
    Interval x(std::min(a, b), std::max(a, b));
    double px = pick_inside(rng, x);
    CHECK(contains(sin_enclosure(x), sin(bf(px))));
    CHECK(contains(cos_enclosure(x), cos(bf(px))));
  }
}

TEST_CASE("monotone tightness on point intervals") {
  Rng rng(42);
  for (int i = 0; i < 20000; ++i) {
    double a = sample_point(rng, 1.0);
    double b = sample_point(rng, 1.0);
    Interval pa(a), pb(b);
    CHECK(ulp_steps(add(pa, pb).lo(), add(pa, pb).hi()) <= 2);
    CHECK(ulp_steps(mul(pa, pb).lo(), mul(pa, pb).hi()) <= 2);
    if (b != 0.0) CHECK(ulp_steps(div(pa, pb).lo(), div(pa, pb).hi()) <= 2);
    double xa = std::fabs(a);
    CHECK(ulp_steps(sqrt(Interval(xa)).lo(), sqrt(Interval(xa)).hi()) <= 2);
    Interval p34 = pow_rational(Interval(xa), Rational(3, 4));
    CHECK(ulp_steps(p34.lo(), p34.hi()) <= 4);
  }
}

TEST_CASE("composition soundness: (1+x^2)^(3/4)") {
  Rng rng(0x5eedc0de);
  for (int i = 0; i < 10000; ++i) {
    double x = sample_point(rng, 2.0);
    Interval ix(x);
    Interval expr = pow_rational(add(mul(ix, ix), Interval(1, 1)), Rational(3, 4));
    kgv::BigFloat truth = pow(bf(1.0) + bf(x) * bf(x), 0.75);
    CHECK(contains(expr, truth));
  }
}

TEST_CASE("pi enclosures straddle the true constants") {
  // sin changes sign exactly at pi, so a correct enclosure of pi makes the
  // sin range contain 0 with endpoints of both signs
  Interval spi = sin_enclosure(pi_interval());
  CHECK(spi.lo() < 0.0);
  CHECK(spi.hi() > 0.0);
  CHECK(pi_interval().lo() < pi_interval().hi());
  CHECK(ulp_steps(pi_interval().lo(), pi_interval().hi()) == 1);
  CHECK(half_pi_interval().lo() * 2.0 == pi_interval().lo());
  CHECK(half_pi_interval().hi() * 2.0 == pi_interval().hi());
}
