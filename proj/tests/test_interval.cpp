#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "harperlab/interval_set.hpp"

using namespace harperlab;

TEST_CASE("construction sorts and merges") {
  BandSet bs({{1.5, 2.0}, {0.0, 1.0}, {0.9, 1.2}});
  REQUIRE(bs.count() == 2);
  CHECK(bs.intervals()[0].lo == 0.0);
  CHECK(bs.intervals()[0].hi == 1.2);
  CHECK(bs.intervals()[1].lo == 1.5);
  CHECK(bs.measure() == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(bs.min() == 0.0);
  CHECK(bs.max() == 2.0);
}

TEST_CASE("touching endpoints merge at zero tolerance") {
  BandSet bs({{0.0, 1.0}, {1.0, 2.0}});
  CHECK(bs.count() == 1);
  CHECK(bs.measure() == doctest::Approx(2.0));
}

TEST_CASE("merge tolerance bridges small gaps only") {
  BandSet bs({{0.0, 1.0}, {1.05, 2.0}, {3.0, 4.0}}, 0.1);
  REQUIRE(bs.count() == 2);
  CHECK(bs.intervals()[0].hi == 2.0);
  CHECK(bs.intervals()[1].lo == 3.0);
}

TEST_CASE("degenerate point bands") {
  BandSet bs({{1.0, 1.0}, {2.0, 2.0}});
  CHECK(bs.count() == 2);
  CHECK(bs.measure() == 0.0);
  CHECK(bs.contains(1.0));
  CHECK_FALSE(bs.contains(1.5));
  CHECK(bs.contains(1.5, 0.5));
}

TEST_CASE("contains with slack") {
  BandSet bs({{0.0, 1.0}});
  CHECK(bs.contains(0.5));
  CHECK(bs.contains(1.0));
  CHECK_FALSE(bs.contains(1.0001));
  CHECK(bs.contains(1.0001, 1e-3));
  CHECK_FALSE(bs.contains(-0.01));
  CHECK(bs.contains(-0.01, 0.01));
}

TEST_CASE("inflation re-merges") {
  BandSet bs({{0.0, 1.0}, {1.1, 2.0}});
  BandSet big = bs.inflated(0.06);
  REQUIRE(big.count() == 1);
  CHECK(big.min() == doctest::Approx(-0.06));
  CHECK(big.max() == doctest::Approx(2.06));

  BandSet small = bs.inflated(0.04);
  CHECK(small.count() == 2);
  CHECK(small.measure() == doctest::Approx(1.9 + 4 * 0.04));
}

TEST_CASE("point distance") {
  BandSet bs({{0.0, 1.0}, {2.0, 3.0}});
  CHECK(point_distance(0.5, bs) == 0.0);
  CHECK(point_distance(1.0, bs) == 0.0);
  CHECK(point_distance(1.4, bs) == doctest::Approx(0.4));
  CHECK(point_distance(1.6, bs) == doctest::Approx(0.4));
  CHECK(point_distance(-2.0, bs) == doctest::Approx(2.0));
  CHECK(point_distance(4.5, bs) == doctest::Approx(1.5));
}

TEST_CASE("directed deviation is one-sided") {
  BandSet whole({{0.0, 3.0}});
  BandSet split({{0.0, 1.0}, {2.0, 3.0}});
  // Points of the solid band reach at most the gap midpoint.
  CHECK(directed_deviation(whole, split) == doctest::Approx(0.5));
  CHECK(directed_deviation(split, whole) == 0.0);
  CHECK(hausdorff_distance(whole, split) == doctest::Approx(0.5));
  CHECK(hausdorff_distance(split, whole) == doctest::Approx(0.5));
}

TEST_CASE("hausdorff distance of shifted sets") {
  BandSet a({{0.0, 1.0}});
  BandSet b({{0.25, 1.1}});
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.25));
  CHECK(measure(a) == doctest::Approx(1.0));
}

TEST_CASE("static merged combines two sets") {
  BandSet a({{0.0, 1.0}});
  BandSet b({{0.95, 2.0}, {5.0, 6.0}});
  BandSet m = BandSet::merged(a, b, 0.0);
  REQUIRE(m.count() == 2);
  CHECK(m.intervals()[0].lo == 0.0);
  CHECK(m.intervals()[0].hi == 2.0);
  CHECK(m.intervals()[1].lo == 5.0);
}

TEST_CASE("merging again is a no-op") {
  BandSet bs({{0.0, 1.0}, {1.5, 2.0}}, 0.1);
  BandSet again(bs.intervals(), 0.1);
  REQUIRE(again.count() == bs.count());
  for (std::size_t i = 0; i < bs.count(); ++i) {
    CHECK(again.intervals()[i].lo == bs.intervals()[i].lo);
    CHECK(again.intervals()[i].hi == bs.intervals()[i].hi);
  }
}
