#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "intervalkit/families.hpp"
#include "intervalkit/preimage.hpp"
#include "intervalkit/rng.hpp"

using namespace intervalkit;

TEST_CASE("branch inversion on affine and quadratic branches") {
  MapSpec dbl = make_builtin("doubling");
  auto x = invert_branch(dbl.branches()[1], 0.2);
  REQUIRE(x.has_value());
  CHECK(static_cast<double>(*x) == doctest::Approx(0.6).epsilon(1e-12));

  MapSpec logi = make_builtin("logistic");
  auto y = invert_branch(logi.branches()[0], 0.75);
  REQUIRE(y.has_value());
  CHECK(static_cast<double>(*y) == doctest::Approx(0.25).epsilon(1e-12));
  // residual contract
  CHECK(std::abs(static_cast<double>(logi.branches()[0].f(*y)) - 0.75) < 1e-12);

  CHECK(!invert_branch(dbl.branches()[0], 1.2).has_value());
  CHECK(!invert_branch(logi.branches()[0], -0.1).has_value());

  // value-range endpoints invert to domain endpoints
  auto top = invert_branch(logi.branches()[0], 1.0);
  REQUIRE(top.has_value());
  CHECK(static_cast<double>(*top) == doctest::Approx(0.5));
}

TEST_CASE("one-step preimage of a dyadic ball under the doubling map") {
  MapSpec m = make_builtin("doubling");
  IntervalSet target = IntervalSet::normalized({{0.375, 0.625}});  // B(1/2, 1/8)
  IntervalSet pre = one_step_preimage(m, target);
  REQUIRE(pre.size() == 2);
  CHECK(static_cast<double>(pre.parts()[0].lo) == doctest::Approx(3.0 / 16).epsilon(1e-12));
  CHECK(static_cast<double>(pre.parts()[0].hi) == doctest::Approx(5.0 / 16).epsilon(1e-12));
  CHECK(static_cast<double>(pre.parts()[1].lo) == doctest::Approx(11.0 / 16).epsilon(1e-12));
  CHECK(static_cast<double>(pre.parts()[1].hi) == doctest::Approx(13.0 / 16).epsilon(1e-12));
  CHECK(static_cast<double>(pre.measure()) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("logistic preimage of a top sliver is an interval around 1/2") {
  MapSpec m = make_builtin("logistic");
  IntervalSet pre = preimage_set(m, IntervalSet::normalized({{0.99, 1.0}}), 1);
  REQUIRE(pre.size() == 1);
  // 4x(1-x) > 0.99 iff |x - 1/2| < 0.05
  CHECK(static_cast<double>(pre.parts()[0].lo) == doctest::Approx(0.45).epsilon(1e-9));
  CHECK(static_cast<double>(pre.parts()[0].hi) == doctest::Approx(0.55).epsilon(1e-9));
  CHECK(static_cast<double>(pre.measure()) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("preimage_set with n = 0 returns the normalized target") {
  MapSpec m = make_builtin("doubling");
  IntervalSet t = IntervalSet::normalized({{0.2, 0.3}});
  IntervalSet p = preimage_set(m, t, 0);
  CHECK(p.size() == 1);
  CHECK(static_cast<double>(p.measure()) == doctest::Approx(0.1));
  CHECK_THROWS_AS(preimage_set(m, t, -1), Error);
  CHECK_THROWS_AS(preimage_set(m, IntervalSet::normalized({{0.5, 1.5}}), 1), Error);
}

TEST_CASE("measure-preserving maps conserve preimage measure exactly") {
  std::mt19937_64 gen(41);
  for (const char* family : {"doubling", "tent"}) {
    MapSpec m = make_builtin(family);
    for (int trial = 0; trial < 5; ++trial) {
      double lo = 0.1 + 0.5 * uniform01(gen);
      double len = 0.01 + 0.2 * uniform01(gen);
      IntervalSet e = IntervalSet::normalized({{lo, lo + len}});
      double m0 = static_cast<double>(e.measure());
      for (int n = 1; n <= 20; ++n) {
        e = one_step_preimage(m, e);
        CHECK(std::abs(static_cast<double>(e.measure()) - m0) <= 1e-9 * m0);
      }
    }
  }
}

TEST_CASE("round trip: points of f^-n(A) map back into closure(A)") {
  MapSpec m = make_builtin("logistic");
  IntervalSet a = IntervalSet::normalized({{0.3, 0.35}, {0.7, 0.72}});
  const int n = 6;
  IntervalSet pre = preimage_set(m, a, n);
  REQUIRE(!pre.empty());
  std::mt19937_64 gen(17);
  int checked = 0;
  for (int s = 0; s < 1000; ++s) {
    const Interval& comp = pre.parts()[gen() % pre.size()];
    double x = static_cast<double>(comp.lo) +
               uniform01(gen) * static_cast<double>(comp.length());
    double y = x;
    for (int k = 0; k < n; ++k) y = m.eval(y);
    CHECK(a.contains(y, 1e-9));
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("Monte Carlo completeness: no preimage point is missed") {
  MapSpec m = make_builtin("logistic");
  IntervalSet a = IntervalSet::normalized({{0.2, 0.26}, {0.6, 0.61}});
  const int n = 6;
  IntervalSet pre = preimage_set(m, a, n);
  std::mt19937_64 gen(99);
  int hits = 0, misses = 0;
  for (int s = 0; s < 100000; ++s) {
    double x = uniform01(gen);
    double y = x;
    for (int k = 0; k < n; ++k) y = m.eval(y);
    // skip boundary skims where membership is ambiguous at fp precision
    bool inside_robust = a.contains(y, -1e-9);
    if (!inside_robust) continue;
    ++hits;
    if (!pre.contains(x, 1e-12)) ++misses;
  }
  CHECK(hits > 1000);
  CHECK(misses == 0);
}

TEST_CASE("monotonicity: nested targets give nested preimage measures") {
  MapSpec m = make_builtin("logistic");
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 10; ++trial) {
    double lo = 0.2 + 0.4 * uniform01(gen);
    double len = 0.05 + 0.1 * uniform01(gen);
    double shrink = 0.2 + 0.5 * uniform01(gen);
    IntervalSet big = IntervalSet::normalized({{lo, lo + len}});
    IntervalSet small =
        IntervalSet::normalized({{lo + 0.25 * (1 - shrink) * len,
                                  lo + len - 0.25 * (1 - shrink) * len}});
    for (int n : {1, 3, 6}) {
      CHECK(preimage_set(m, small, n).measure() <=
            preimage_set(m, big, n).measure() + 1e-12L);
    }
  }
}

TEST_CASE("prop1: affine expanding maps give ratio exactly 2") {
  for (const char* family : {"doubling", "tent"}) {
    MapSpec m = make_builtin(family);
    Prop1Report rep = prop1_check(m, 0, {1e-2, 1e-3}, 10);
    INFO(family);
    for (const Prop1Cell& cell : rep.grid) {
      CHECK(std::abs(cell.ratio - 2.0) <= 1e-9);
    }
    CHECK(rep.bounded);
  }
}

TEST_CASE("prop1: logistic ratios stay bounded across decades") {
  MapSpec m = make_builtin("logistic");
  Prop1Report rep = prop1_check(m, 0, {1e-2, 1e-3}, 10);
  CHECK(rep.bounded);
  CHECK(rep.max_ratio > 0.0);
  CHECK(rep.max_ratio < 50.0);
  CHECK_THROWS_AS(prop1_check(m, 0, {0.6}, 5), Error);  // ball leaves [0,1]
  CHECK_THROWS_AS(prop1_check(m, 2, {1e-2}, 5), Error);
}

TEST_CASE("prop2: doubling slope is exactly one") {
  MapSpec m = make_builtin("doubling");
  Prop2Report rep = prop2_check(m, {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}, 6, 10, 77);
  CHECK(std::abs(rep.slope - 1.0) <= 1e-6);
  CHECK(rep.reference_exponent == doctest::Approx(1.0));
  CHECK(rep.seed == 77);
  // every target's worst measure equals its own measure for a
  // measure-preserving map, and the full (target, n) grid is recorded
  for (const Prop2TargetSummary& t : rep.targets) {
    CHECK(t.worst_measure == doctest::Approx(t.target_measure).epsilon(1e-9));
  }
  CHECK(rep.grid.size() == rep.targets.size() * 7);  // n = 0..6
  for (const Prop2Cell& cell : rep.grid) {
    CHECK(cell.measure == doctest::Approx(cell.target_measure).epsilon(1e-9));
  }
  CHECK_THROWS_AS(prop2_check(m, {0.2}, 6, 10, 1), Error);
  CHECK_THROWS_AS(prop2_check(m, {1e-2}, 6, 5, 1), Error);
}

TEST_CASE("prop2: logistic worst case scales like sqrt(|A|)") {
  MapSpec m = make_builtin("logistic");
  Prop2Report rep = prop2_check(m, {1e-2, 1e-3, 1e-4}, 8, 10, 3);
  CHECK(rep.slope >= 0.45);
  CHECK(rep.slope <= 0.60);
}

TEST_CASE("prop2: asymmetric orders push the exponent toward 1/l_max") {
  MapSpec m = make_builtin("asymmetric_unimodal");  // l_max = 2.5
  Prop2Report rep = prop2_check(m, {1e-2, 1e-3, 1e-4}, 8, 10, 3);
  CHECK(rep.reference_exponent == doctest::Approx(0.4));
  CHECK(rep.slope >= 0.4 - 0.05);
  CHECK(rep.slope <= 0.75);
}

TEST_CASE("wandering search: expanding maps mix intervals quickly") {
  MapSpec logi = make_builtin("logistic");
  WanderReport rep = wandering_search(logi, {0.10, 0.11}, 50);
  CHECK(rep.outcome == WanderReport::Outcome::collision);
  CHECK(rep.first_collision <= 10);
  CHECK(rep.disjoint_count == rep.first_collision - 1);
}

TEST_CASE("wandering search: the gap of an injective map never collides") {
  MapSpec gap = make_builtin("gap_affine");
  const CriticalPoint& cp = gap.critical_points()[0];
  WanderReport rep = wandering_search(
      gap, {cp.value_left, cp.value_right}, 50);
  CHECK(rep.outcome == WanderReport::Outcome::disjoint);
  CHECK(rep.disjoint_count == 50);
}

TEST_CASE("wandering search: straddling a branch boundary is a hard stop") {
  MapSpec dbl = make_builtin("doubling");
  WanderReport rep = wandering_search(dbl, {0.2, 0.3}, 50);
  CHECK(rep.outcome == WanderReport::Outcome::straddle);
  CHECK(rep.straddle_step <= 2);

  WanderReport inside = wandering_search(dbl, {0.45, 0.55}, 50);
  CHECK(inside.outcome == WanderReport::Outcome::straddle);
  CHECK(inside.straddle_step == 1);

  CHECK_THROWS_AS(wandering_search(dbl, {0.3, 0.3}, 50), Error);
}

TEST_CASE("Koebe distortion along diffeomorphic pullbacks, tau = 1") {
  MapSpec m = make_builtin("logistic");
  std::mt19937_64 gen(2024);
  for (int config = 0; config < 20; ++config) {
    // target I with a 1-scaled collar on both sides
    double len = 0.02 + 0.06 * uniform01(gen);
    double lo = len + (1.0 - 3.0 * len) * uniform01(gen);
    Interval inner{lo, lo + len};
    Interval outer{lo - len, lo + 2.0 * len};

    int n = 4 + static_cast<int>(gen() % 5);
    Interval icur = inner, tcur = outer;
    for (int k = 0; k < n; ++k) {
      const Branch& b = m.branches()[gen() % 2];
      Real ia = *invert_branch(b, icur.lo), ib = *invert_branch(b, icur.hi);
      Real ta = *invert_branch(b, tcur.lo), tb = *invert_branch(b, tcur.hi);
      icur = {std::min(ia, ib), std::max(ia, ib)};
      tcur = {std::min(ta, tb), std::max(ta, tb)};
    }
    // sampled distortion of Df^n over the pulled-back inner interval
    double dmin = 1e300, dmax = 0.0;
    for (int s = 0; s <= 50; ++s) {
      double x = static_cast<double>(icur.lo) +
                 (static_cast<double>(icur.length()) * s) / 50.0;
      double logd = 0.0, y = x;
      for (int k = 0; k < n; ++k) {
        logd += std::log(std::abs(m.deriv(y, 1)));
        y = m.eval(y);
      }
      double d = std::exp(logd);
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
    INFO("config ", config, " n=", n);
    CHECK(dmax / dmin <= 4.0 + 1e-9);  // ((1+tau)/tau)^2 at tau = 1
  }
}
