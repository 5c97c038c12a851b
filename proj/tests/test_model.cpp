#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "harperlab/errors.hpp"
#include "harperlab/model.hpp"

using namespace harperlab;

TEST_CASE("trig polynomial evaluation and derivative") {
  TrigPoly f;
  f.c0 = 0.5;
  f.terms.push_back({1, 2.0, 0.0});   // 2 cos 2 pi x
  f.terms.push_back({3, 0.0, -1.0});  // -sin 6 pi x
  for (double x : {0.0, 0.1, 0.37, 0.99}) {
    double want = 0.5 + 2.0 * std::cos(2 * M_PI * x) - std::sin(6 * M_PI * x);
    CHECK(f.eval(x) == doctest::Approx(want).epsilon(1e-14));
    CHECK(f.eval(x + 1.0) == doctest::Approx(f.eval(x)).epsilon(1e-12));
    double dwant = -4 * M_PI * std::sin(2 * M_PI * x) - 6 * M_PI * std::cos(6 * M_PI * x);
    CHECK(f.deriv(x) == doctest::Approx(dwant).epsilon(1e-12));
  }
  CHECK(f.deriv_sup() == doctest::Approx(2 * M_PI * 2.0 + 2 * M_PI * 3.0));
}

TEST_CASE("trig polynomial shift is exact") {
  TrigPoly f;
  f.terms.push_back({1, 1.3, -0.4});
  f.terms.push_back({2, 0.0, 2.0});
  TrigPoly g = f.shifted(0.3);
  for (double x : {0.0, 0.21, 0.5, 0.77}) {
    CHECK(g.eval(x) == doctest::Approx(f.eval(x + 0.3)).epsilon(1e-13));
    CHECK(g.deriv(x) == doctest::Approx(f.deriv(x + 0.3)).epsilon(1e-11));
  }
  // The bound is a per-harmonic L1 sum, so a shift (rotation in each
  // harmonic plane) can move it, but only within a factor sqrt(2), and it
  // must keep dominating the actual derivative.
  CHECK(g.deriv_sup() <= std::sqrt(2.0) * f.deriv_sup() + 1e-12);
  CHECK(f.deriv_sup() <= std::sqrt(2.0) * g.deriv_sup() + 1e-12);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) worst = std::max(worst, std::fabs(g.deriv(i / 1000.0)));
  CHECK(worst <= g.deriv_sup() + 1e-12);
}

TEST_CASE("almost Mathieu family") {
  auto fam = make_amo(1.0);
  CHECK(fam.kind == FamilyKind::Amo);
  CHECK(fam.lambda == 1.0);
  CHECK(fam.v_at(0.0) == doctest::Approx(2.0));
  CHECK(fam.v_at(0.25) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(fam.b_at(0.123) == doctest::Approx(1.0));
  CHECK(fam.b_zeros.empty());
  CHECK(fam.motion_bound() == doctest::Approx(4 * M_PI));

  auto fam2 = make_amo(2.5);
  CHECK(fam2.v_at(0.5) == doctest::Approx(-5.0));
  CHECK(fam2.motion_bound() == doctest::Approx(10 * M_PI));
}

TEST_CASE("chiral family") {
  auto fam = make_chiral();
  CHECK(fam.kind == FamilyKind::Chiral);
  CHECK(fam.v.is_constant());
  CHECK(fam.v_at(0.3) == 0.0);
  CHECK(fam.b_at(0.25) == doctest::Approx(2.0));
  CHECK(fam.b_at(0.75) == doctest::Approx(-2.0));
  REQUIRE(fam.b_zeros.size() == 2);
  CHECK(fam.b_zeros[0] == doctest::Approx(0.0));
  CHECK(fam.b_zeros[1] == doctest::Approx(0.5));
  CHECK(fam.motion_bound() == doctest::Approx(8 * M_PI));
}

TEST_CASE("shifted chiral folds the offset into the phase") {
  Frac third(1, 3);
  auto fam = make_shifted_chiral(third);
  double off = 0.25 + third.value() / 2.0;
  for (double x : {0.0, 0.1, 0.62}) {
    CHECK(fam.b_at(x) == doctest::Approx(2.0 * std::sin(2 * M_PI * (x + off))).epsilon(1e-13));
  }
  for (double z : fam.b_zeros) {
    CHECK(std::fabs(fam.b_at(z)) < 1e-12);
    CHECK(z >= 0.0);
    CHECK(z < 1.0);
  }
  CHECK(fam.b_zeros.size() == 2);
}

TEST_CASE("custom family validation falsifies wrong claims") {
  TrigPoly zero;
  TrigPoly b;
  b.terms.push_back({1, 0.0, 2.0});  // 2 sin 2 pi x, zeros 0 and 1/2

  CHECK_NOTHROW(make_custom("ok", zero, b, 0.0, 4 * M_PI, {0.0, 0.5}));
  // b identically zero with no zeros declared: vanishing away from the list.
  CHECK_THROWS_AS(make_custom("bad", zero, zero, 0.0, 0.0, {}),
                  std::invalid_argument);
  // A claimed zero where b does not vanish.
  CHECK_THROWS_AS(make_custom("bad", zero, b, 0.0, 4 * M_PI, {0.0, 0.25, 0.5}),
                  std::invalid_argument);
  // Understated derivative bound.
  CHECK_THROWS_AS(make_custom("bad", zero, b, 0.0, 2.0, {0.0, 0.5}),
                  std::invalid_argument);
}

TEST_CASE("model spec parsing") {
  auto amo = parse_model_spec("amo:2.5");
  CHECK(amo.kind == FamilyKind::Amo);
  CHECK(amo.lambda == doctest::Approx(2.5));
  auto ch = parse_model_spec("chiral");
  CHECK(ch.kind == FamilyKind::Chiral);
  CHECK_THROWS_AS(parse_model_spec("banana"), UsageError);
  CHECK_THROWS_AS(parse_model_spec("amo:zero"), UsageError);
}

TEST_CASE("json family round trip") {
  std::string text = R"({
    "name": "halfsine",
    "v": {"const": "1/2"},
    "b": {"sin": [[1, 1.0]]},
    "v_deriv_max": 0.0,
    "b_deriv_max": 6.2831853071795865,
    "b_zeros": [0.0, 0.5]
  })";
  auto fam = family_from_json_text(text);
  CHECK(fam.name == "halfsine");
  CHECK(fam.v_at(0.37) == doctest::Approx(0.5));
  CHECK(fam.b_at(0.25) == doctest::Approx(1.0));
  CHECK(fam.b_zeros.size() == 2);
  CHECK_THROWS(family_from_json_text("{"));
  CHECK_THROWS(family_from_json_text("[1,2,3]"));
}

TEST_CASE("family tokens distinguish models") {
  CHECK(family_token(make_amo(1.0)) != family_token(make_amo(2.0)));
  CHECK(family_token(make_amo(1.0)) != family_token(make_chiral()));
  CHECK(family_token(make_chiral()) == family_token(make_chiral()));
}

TEST_CASE("rational sampling is exactly periodic") {
  auto op = make_op(make_amo(1.0), Frac(1, 3), 0.17);
  CHECK(op.rational);
  for (std::int64_t n = -6; n <= 6; ++n) {
    CHECK(op.v_n(n) == op.v_n(n + 3));  // bitwise: phases reduced mod q
    CHECK(op.b_n(n) == op.b_n(n + 3));
    CHECK(op.phase(n) >= 0.0);
    CHECK(op.phase(n) < 1.0);
  }
}

TEST_CASE("irrational sampling matches direct phase evaluation") {
  double alpha = 0.6180339887498949;
  auto op = make_op(make_chiral(), alpha, 0.05);
  CHECK_FALSE(op.rational);
  for (std::int64_t n : {0, 1, 7, 40}) {
    double ph = 0.05 + n * alpha;
    ph -= std::floor(ph);
    CHECK(op.b_n(n) == doctest::Approx(2.0 * std::sin(2 * M_PI * ph)).epsilon(1e-12));
  }
}

TEST_CASE("coefficient window sampling") {
  auto op = make_op(make_amo(0.5), Frac(2, 5), 0.0);
  auto [v, b] = sample_coeffs(op, -2, 7);
  REQUIRE(v.size() == 10);
  REQUIRE(b.size() == 10);
  CHECK(v[2] == op.v_n(0));
  CHECK(v[0] == op.v_n(-2));
  CHECK(b[9] == op.b_n(7));
}
