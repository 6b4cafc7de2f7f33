#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "intervalkit/errors.hpp"
#include "intervalkit/interval.hpp"
#include "intervalkit/rng.hpp"

using namespace intervalkit;

TEST_CASE("normalized sorts, drops empties and merges touching parts") {
  IntervalSet s = IntervalSet::normalized(
      {{0.7, 0.9}, {0.1, 0.2}, {0.2, 0.2}, {0.2 + 5e-14, 0.4}});
  REQUIRE(s.size() == 2);
  CHECK(static_cast<double>(s.parts()[0].lo) == doctest::Approx(0.1));
  CHECK(static_cast<double>(s.parts()[0].hi) == doctest::Approx(0.4));
  CHECK(static_cast<double>(s.parts()[1].lo) == doctest::Approx(0.7));
  CHECK(static_cast<double>(s.measure()) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gaps above the touch tolerance stay separate") {
  IntervalSet s = IntervalSet::normalized({{0.1, 0.2}, {0.2 + 1e-9, 0.3}});
  CHECK(s.size() == 2);
}

TEST_CASE("short components are kept, not dropped") {
  IntervalSet s = IntervalSet::normalized({{0.1, 0.1 + 1e-15}, {0.5, 0.6}});
  REQUIRE(s.size() == 2);
  CHECK(static_cast<double>(s.parts()[0].length()) ==
        doctest::Approx(1e-15).epsilon(1e-3));
}

TEST_CASE("contains honours the boundary tolerance") {
  IntervalSet s = IntervalSet::normalized({{0.2, 0.3}, {0.6, 0.7}});
  CHECK(s.contains(0.25));
  CHECK(s.contains(0.65));
  CHECK(!s.contains(0.5));
  CHECK(!s.contains(0.3 + 1e-6));
  CHECK(s.contains(0.3 + 1e-14, 1e-13));
  CHECK(s.contains(0.6 - 1e-14, 1e-13));
  CHECK(!s.contains(0.1));
  CHECK(IntervalSet().contains(0.5) == false);
}

TEST_CASE("from_sorted validates ordering") {
  CHECK_NOTHROW(IntervalSet::from_sorted({{0.1, 0.2}, {0.2, 0.4}}));
  CHECK_THROWS_AS(IntervalSet::from_sorted({{0.3, 0.4}, {0.1, 0.2}}), Error);
  CHECK_THROWS_AS(IntervalSet::normalized({{0.4, 0.3}}), Error);
}

TEST_CASE("random soups normalize to sorted disjoint parts with exact measure") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Interval> soup;
    int n = 1 + static_cast<int>(gen() % 40);
    for (int i = 0; i < n; ++i) {
      double lo = uniform01(gen);
      double len = uniform01(gen) * 0.05;
      soup.push_back({lo, std::min(1.0, lo + len)});
    }
    IntervalSet s = IntervalSet::normalized(soup);
    Real sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Interval& p = s.parts()[i];
      REQUIRE(p.lo <= p.hi);
      if (i > 0) REQUIRE(s.parts()[i - 1].hi < p.lo);
      sum += p.length();
    }
    // measure equals the sum of component lengths
    CHECK(static_cast<double>(std::abs(s.measure() - sum)) <=
          1e-12 * static_cast<double>(sum));
    CHECK(s.measure() <= 1.0L + 1e-12L);
  }
}

TEST_CASE("bounding covers the whole set") {
  IntervalSet s = IntervalSet::normalized({{0.4, 0.5}, {0.1, 0.2}});
  CHECK(static_cast<double>(s.bounding().lo) == doctest::Approx(0.1));
  CHECK(static_cast<double>(s.bounding().hi) == doctest::Approx(0.5));
}
