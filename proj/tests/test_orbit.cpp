#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "intervalkit/families.hpp"
#include "intervalkit/orbit.hpp"

using namespace intervalkit;

TEST_CASE("doubling: right orbit sits at the fixed point 0 with slope 2") {
  MapSpec m = make_builtin("doubling");
  OrbitRecord rec = critical_orbit(m, 0, Side::right, 50);
  REQUIRE(rec.points.size() == 50);
  CHECK(!rec.hit_critical);
  for (double p : rec.points) CHECK(p == doctest::Approx(0.0));
  const double log2 = std::log(2.0);
  for (std::size_t i = 0; i < rec.log_deriv.size(); ++i) {
    CHECK(rec.log_deriv[i] ==
          doctest::Approx((i + 1) * log2).epsilon(1e-12));
    CHECK(rec.nearest[i].distance == doctest::Approx(0.5));
    CHECK(rec.nearest[i].approach_side == Side::left);
  }
}

TEST_CASE("logistic: orbit 1, 0, 0, ... with |Df^n(f(c))| = 4^n") {
  MapSpec m = make_builtin("logistic");
  OrbitRecord rec = critical_orbit(m, 0, Side::left, 40);
  REQUIRE(rec.points.size() == 40);
  CHECK(rec.points[0] == doctest::Approx(1.0));
  CHECK(rec.points[1] == doctest::Approx(0.0));
  CHECK(rec.points[2] == doctest::Approx(0.0));
  // orbit consistency: points[n+1] = eval(points[n])
  for (std::size_t i = 0; i + 1 < rec.points.size(); ++i) {
    CHECK(rec.points[i + 1] ==
          doctest::Approx(m.eval(rec.points[i])).epsilon(1e-12));
  }
  // chain-rule product cross-check before overflow territory
  double direct = 1.0;
  for (int n = 0; n < 30; ++n) {
    direct *= std::abs(m.deriv(rec.points[n], 1));
    CHECK(std::exp(rec.log_deriv[n]) ==
          doctest::Approx(direct).epsilon(1e-9));
  }
  CHECK(std::exp(rec.log_deriv[4]) == doctest::Approx(std::pow(4.0, 5)));
}

TEST_CASE("tent slope 2: same chain with constant slope") {
  MapSpec m = make_builtin("tent");
  OrbitRecord rec = critical_orbit(m, 0, Side::right, 30);
  CHECK(rec.points[0] == doctest::Approx(1.0));
  CHECK(rec.points[1] == doctest::Approx(0.0));
  CHECK(std::exp(rec.log_deriv[9]) == doctest::Approx(1024.0).epsilon(1e-9));
}

TEST_CASE("orbit stops early when it lands on the critical set") {
  // lorenz_affine with f(c-) = c: the left orbit dies immediately
  MapSpec m = make_builtin(
      "lorenz_affine",
      {{"f0", 0.1}, {"fc_left", 0.5}, {"fc_right", 0.2}, {"f1", 0.9}});
  OrbitRecord rec = critical_orbit(m, 0, Side::left, 10);
  CHECK(rec.hit_critical);
  CHECK(rec.hit_step == 1);
  CHECK(rec.hit_value == doctest::Approx(0.5));
  CHECK(rec.points.empty());
  CHECK_THROWS_AS(summability_series_2(rec), Error);
}

TEST_CASE("series (2): doubling terms are 2^-n and the sum telescopes") {
  MapSpec m = make_builtin("doubling");
  OrbitRecord rec = critical_orbit(m, 0, Side::right, 100);
  SummabilityReport rep = summability_series_2(rec);
  REQUIRE(rep.terms.size() == 100);
  for (std::size_t i = 0; i < rep.terms.size(); ++i) {
    CHECK(rep.terms[i] ==
          doctest::Approx(std::exp2(-double(i + 1))).epsilon(1e-12));
  }
  CHECK(std::abs(rep.partial_sums.back() - (1.0 - std::exp2(-100.0))) < 1e-12);
  CHECK(rep.verdict == SummabilityReport::Verdict::converges);
  CHECK(rep.tail_fit.model == TailFit::Model::geometric);
  CHECK(rep.tail_fit.rate == doctest::Approx(0.5).epsilon(1e-9));
  // partial sums are monotone nondecreasing
  for (std::size_t i = 1; i < rep.partial_sums.size(); ++i) {
    CHECK(rep.partial_sums[i] >= rep.partial_sums[i - 1]);
  }
}

TEST_CASE("series (1) reduces to series (2) when all orders are equal") {
  MapSpec logi = make_builtin("logistic");
  OrbitRecord rec = critical_orbit(logi, 0, Side::right, 100);
  SummabilityReport s1 = summability_series_1(logi, rec);
  SummabilityReport s2 = summability_series_2(rec);
  REQUIRE(s1.terms.size() == s2.terms.size());
  for (std::size_t i = 0; i < s1.terms.size(); ++i) {
    CHECK(s1.terms[i] == doctest::Approx(s2.terms[i]).epsilon(1e-12));
  }
  CHECK(s1.verdict == SummabilityReport::Verdict::converges);
  CHECK(std::abs(s1.partial_sums.back() - 1.0) < 1e-9);
  CHECK(std::abs(s2.partial_sums.back() - 1.0) < 1e-9);

  MapSpec dbl = make_builtin("doubling");
  OrbitRecord drec = critical_orbit(dbl, 0, Side::right, 60);
  SummabilityReport d1 = summability_series_1(dbl, drec);
  SummabilityReport d2 = summability_series_2(drec);
  for (std::size_t i = 0; i < d1.terms.size(); ++i) {
    CHECK(d1.terms[i] == doctest::Approx(d2.terms[i]).epsilon(1e-12));
  }
}

TEST_CASE("series (1) matches a direct high-precision evaluation") {
  MapSpec m = make_builtin("lorenz_power");
  OrbitRecord rec = critical_orbit(m, 0, Side::right, 60);
  REQUIRE(!rec.hit_critical);
  SummabilityReport rep = summability_series_1(m, rec);

  // independent route: long-double chain product, no log accumulation
  long double product = 1.0L;
  const double lc = rec.departing_order;
  for (int n = 0; n < 10; ++n) {
    product *= std::abs((long double)m.deriv(rec.points[n], 1));
    const NearestCritical& nc = rec.nearest[n];
    double lt = m.critical_points()[nc.index].order(nc.approach_side);
    long double dist = nc.distance;
    long double term =
        std::pow(std::pow(dist, (long double)lt) /
                     (std::pow(dist, (long double)lc) * product),
                 1.0L / lc);
    CHECK(rep.terms[n] ==
          doctest::Approx(static_cast<double>(term)).epsilon(1e-9));
  }
}

TEST_CASE("hand-built diverging record: |Df^n| = n^2 with l = 2 gives 1/n") {
  OrbitRecord rec;
  rec.departing_order = 2.0;
  for (int n = 1; n <= 200; ++n) {
    rec.points.push_back(0.3);
    rec.log_deriv.push_back(2.0 * std::log(double(n)));
    rec.nearest.push_back({0, Side::left, 0.2, false});
  }
  SummabilityReport rep = summability_series_2(rec);
  CHECK(rep.terms[0] == doctest::Approx(1.0));
  CHECK(rep.terms[99] == doctest::Approx(0.01));
  CHECK(rep.verdict == SummabilityReport::Verdict::diverges);
  CHECK(rep.tail_fit.model == TailFit::Model::power);
  CHECK(rep.tail_fit.rate == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("flat positive terms diverge; noisy terms are inconclusive") {
  OrbitRecord flat;
  flat.departing_order = 1.0;
  for (int n = 0; n < 100; ++n) {
    flat.points.push_back(0.3);
    flat.log_deriv.push_back(0.7);  // constant |Df^n|
    flat.nearest.push_back({0, Side::left, 0.2, false});
  }
  CHECK(summability_series_2(flat).verdict ==
        SummabilityReport::Verdict::diverges);

  OrbitRecord noisy;
  noisy.departing_order = 1.0;
  unsigned state = 12345u;
  for (int n = 0; n < 100; ++n) {
    state = state * 1664525u + 1013904223u;
    double u = double(state >> 8) / double(1u << 24);
    noisy.points.push_back(0.3);
    noisy.log_deriv.push_back(10.0 * u - 5.0);
    noisy.nearest.push_back({0, Side::left, 0.2, false});
  }
  CHECK(summability_series_2(noisy).verdict ==
        SummabilityReport::Verdict::inconclusive);
}

TEST_CASE("derivative growth check") {
  MapSpec dbl = make_builtin("doubling");
  GrowthCheck g = derivative_growth_check(critical_orbit(dbl, 0, Side::right, 60));
  CHECK(g.grows);
  CHECK(g.slope == doctest::Approx(std::log(2.0)).epsilon(1e-9));

  MapSpec logi = make_builtin("logistic");
  GrowthCheck gl = derivative_growth_check(critical_orbit(logi, 0, Side::right, 60));
  CHECK(gl.grows);
  CHECK(gl.slope == doctest::Approx(std::log(4.0)).epsilon(1e-9));

  OrbitRecord neutral;
  neutral.departing_order = 1.0;
  for (int n = 0; n < 40; ++n) {
    neutral.points.push_back(0.3);
    neutral.log_deriv.push_back(0.2);  // no growth
    neutral.nearest.push_back({0, Side::left, 0.2, false});
  }
  GrowthCheck gn = derivative_growth_check(neutral);
  CHECK(!gn.grows);
  CHECK(gn.min_log_deriv_tail == doctest::Approx(0.2));

  OrbitRecord tiny;
  tiny.points.assign(5, 0.3);
  tiny.log_deriv.assign(5, 0.1);
  CHECK_THROWS_AS(derivative_growth_check(tiny), Error);
}

TEST_CASE("tie-break flip changes nothing for orbits without exact ties") {
  MapSpec m = make_builtin("logistic");
  OrbitRecord lower = critical_orbit(m, 0, Side::right, 80, TieBreak::lower);
  OrbitRecord upper = critical_orbit(m, 0, Side::right, 80, TieBreak::upper);
  SummabilityReport s_lower = summability_series_1(m, lower);
  SummabilityReport s_upper = summability_series_1(m, upper);
  REQUIRE(s_lower.terms.size() == s_upper.terms.size());
  for (std::size_t i = 0; i < s_lower.terms.size(); ++i) {
    CHECK(s_lower.terms[i] == s_upper.terms[i]);
    CHECK(!lower.nearest[i].tie);
  }
}

TEST_CASE("orbit argument validation") {
  MapSpec m = make_builtin("logistic");
  CHECK_THROWS_AS(critical_orbit(m, 0, Side::interior, 10), Error);
  CHECK_THROWS_AS(critical_orbit(m, 0, Side::right, 0), Error);
  CHECK_THROWS_AS(critical_orbit(m, 5, Side::right, 10), Error);
}
