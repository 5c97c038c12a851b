#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "harperlab/contfrac.hpp"
#include "harperlab/errors.hpp"
#include "harperlab/fractal.hpp"
#include "harperlab/model.hpp"

using namespace harperlab;

TEST_CASE("scaling limit constant") {
  CHECK(scaling_limit_c() ==
        doctest::Approx(32.0 * 0.915965594177219015 / M_PI).epsilon(1e-15));
  CHECK(scaling_limit_c() == doctest::Approx(9.3299).epsilon(1e-4));
}

TEST_CASE("cover inflation oracle") {
  BandSet unit({{0.0, 1.0}});
  auto cover = inflate_cover(unit, 10, 1.0);
  double delta = std::log(10.0) / 100.0;
  CHECK(cover.delta == doctest::Approx(delta).epsilon(1e-15));
  REQUIRE(cover.w.size() == 1);
  CHECK(cover.w[0].lo == doctest::Approx(-delta));
  CHECK(cover.w[0].hi == doctest::Approx(1.0 + delta));
  CHECK(cover.total_length == doctest::Approx(1.0460517018598809).epsilon(1e-12));
  CHECK(cover.sum_t(1.0) == doctest::Approx(cover.total_length));
  CHECK(cover.sum_t(0.5) == doctest::Approx(std::sqrt(cover.total_length)));
}

TEST_CASE("inflation merges near-touching bands") {
  // Bands closer than 2 delta coalesce in the cover.
  BandSet bands({{0.0, 0.1}, {0.1005, 0.2}, {0.5, 0.6}});
  auto cover = inflate_cover(bands, 30, 1.0);  // delta = ln(30)/900 = 3.78e-3
  CHECK(cover.w.size() == 2);
  for (const auto& iv : cover.w) CHECK(iv.length() >= 2 * cover.delta - 1e-15);
}

TEST_CASE("cover invariants reject impossible inputs") {
  // More than 3q intervals cannot come from a q-band spectrum.
  std::vector<Interval> many;
  for (int i = 0; i < 8; ++i) many.push_back({i * 1.0, i * 1.0 + 0.2});
  CHECK_THROWS_AS(inflate_cover(BandSet(many), 2, 1.0), std::logic_error);
}

TEST_CASE("holder interpolation bound holds") {
  BandSet bands({{0.0, 0.02}, {0.5, 0.53}, {0.9, 1.0}});
  auto cover = inflate_cover(bands, 12, 1.5);
  for (double t : {0.3, 0.5, 0.7, 0.9, 1.0}) {
    auto hs = hausdorff_sum(cover, t);
    CHECK(hs.sum <= hs.holder_bound * (1 + 1e-12));
    CHECK(hs.sum > 0.0);
  }
}

TEST_CASE("dimension estimate needs three approximants") {
  std::vector<double> t_grid = {0.5, 0.7, 0.9};
  std::vector<Frac> two = {Frac(1, 2), Frac(2, 3)};
  CHECK_THROWS_AS(dim_upper_estimate(make_amo(1.0), two, t_grid, 2.0, 1e-6),
                  InsufficientData);
}

TEST_CASE("dimension estimate on a short golden run") {
  std::vector<Frac> alphas = {Frac(3, 5), Frac(5, 8), Frac(8, 13), Frac(13, 21)};
  std::vector<double> t_grid = {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  auto est = dim_upper_estimate(make_amo(1.0), alphas, t_grid, 2.0, 1e-6);
  REQUIRE(est.qs.size() == 4);
  CHECK(est.qs[3] == 21);
  REQUIRE(est.sums.size() == t_grid.size());
  REQUIRE(est.sums[0].size() == 4);
  // The t = 1 sums track the shrinking measure, so they decrease and the
  // selected exponent exists.
  CHECK(est.t_star <= 1.0);
  CHECK(est.t_star >= 0.4);
  CHECK(est.box_slope > 0.0);
  CHECK(est.box_slope < 1.05);
  REQUIRE(est.box_logN.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(est.box_logN[i] > 0.0);
}

TEST_CASE("thouless scaling rows respect the hard bandwidth bound") {
  auto table = thouless_scaling_table(CFExpansion::golden(), 10, 1e-6);
  REQUIRE(table.rows.size() == 10);
  CHECK(table.reference_c == doctest::Approx(scaling_limit_c()));
  for (const auto& row : table.rows) {
    CHECK(row.q_measure < 8 * std::exp(1.0));
    CHECK(row.q_measure == doctest::Approx(row.q * row.measure).epsilon(1e-12));
  }
  // Total bandwidth decreases along the convergents (q = 1 upward).
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    CHECK(table.rows[i].measure < table.rows[i - 1].measure);
}

TEST_CASE("continuity fit requires two pairs and reports a positive rate") {
  CHECK_THROWS_AS(
      continuity_fit(make_chiral(), CFExpansion::golden(), 4, 4, 1e-6),
      InsufficientData);

  auto fit = continuity_fit(make_chiral(), CFExpansion::golden(), 4, 7, 1e-6);
  REQUIRE(fit.rows.size() >= 3);
  for (const auto& row : fit.rows) {
    CHECK(row.dalpha == doctest::Approx(1.0 / (double(row.q1) * double(row.q2))));
    CHECK(row.d > 0.0);
    CHECK(row.d < 1.0);
  }
  CHECK(fit.gamma > 0.0);
  CHECK(fit.K > 0.0);
  CHECK(!fit.note.empty());
}

TEST_CASE("off-critical bandwidth approaches the coupling limit") {
  auto table = aubry_andre_check(2.0, CFExpansion::golden(), 9, 1e-6);
  CHECK(table.target == doctest::Approx(4.0));
  REQUIRE(!table.rows.empty());
  CHECK(table.rows.back().q == 55);
  CHECK(table.deviations_decreasing);
  CHECK(table.final_relative < 0.2);

  CHECK_THROWS_AS(aubry_andre_check(1.0, CFExpansion::golden(), 6, 1e-6),
                  std::invalid_argument);
  CHECK_THROWS_AS(aubry_andre_check(-0.5, CFExpansion::golden(), 6, 1e-6),
                  std::invalid_argument);
}
