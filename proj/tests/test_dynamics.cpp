#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "harperlab/dynamics.hpp"
#include "harperlab/errors.hpp"
#include "harperlab/model.hpp"
#include "harperlab/spectral.hpp"

using namespace harperlab;

namespace {

const double kGolden = 0.5 * (std::sqrt(5.0) - 1.0);

}  // namespace

TEST_CASE("transfer determinant telescopes") {
  auto fam = make_chiral();
  double alpha = kGolden, theta = 0.137;
  for (long n : {1L, 7L, 50L}) {
    auto st = transfer_product(fam, alpha, theta, 0.4, n);
    CHECK(st.steps == n);
    // det A_n = b(theta - alpha) / b(theta + (n-1) alpha) up to sign.
    // The unit-max-entry m has det(m) ~ e^{-2 log_scale}, so cancellation
    // noise of ~1e-16 in the 2x2 determinant inflates by e^{2 log_scale}.
    double det = st.m.determinant() * std::exp(2.0 * st.log_scale);
    double last = fam.b_at(std::fmod(theta + (n - 1) * alpha, 1.0));
    double prev = fam.b_at(std::fmod(theta - alpha + 1.0, 1.0));
    double eps = 1e-12 + 1e-15 * std::exp(2.0 * st.log_scale);
    CHECK(std::fabs(det) * std::fabs(last) / std::fabs(prev) ==
          doctest::Approx(1.0).epsilon(eps));
  }
}

TEST_CASE("transfer product composes") {
  auto fam = make_amo(1.0);
  double alpha = kGolden, theta = 0.21, E = 0.5;
  auto full = transfer_product(fam, alpha, theta, E, 12);
  auto head = transfer_product(fam, alpha, theta, E, 5);
  double shifted = std::fmod(theta + 5 * alpha, 1.0);
  auto tail = transfer_product(fam, alpha, shifted, E, 7);
  Eigen::Matrix2d prod = tail.m * head.m;
  double scale = tail.log_scale + head.log_scale;
  Eigen::Matrix2d want = full.m * std::exp(full.log_scale - scale);
  CHECK((prod - want).norm() < 1e-9 * prod.norm());
}

TEST_CASE("singular phases are rejected") {
  // theta = 0 starts the chiral product on a vanishing hop.
  CHECK_THROWS_AS(transfer_product(make_chiral(), kGolden, 0.0, 1.0, 3),
                  SingularPhase);
}

TEST_CASE("lyapunov exponent outside the spectrum is large") {
  auto est = lyapunov_numeric(make_amo(1.0), kGolden, 5.0, 3000, 24, 99);
  CHECK(est.L > 0.5);
  CHECK(est.theta_samples == 24);
  // Repeatability: the estimate is a pure function of the seed.
  auto again = lyapunov_numeric(make_amo(1.0), kGolden, 5.0, 3000, 24, 99);
  CHECK(est.L == again.L);
  CHECK(est.stderr_est == again.stderr_est);
  auto other = lyapunov_numeric(make_amo(1.0), kGolden, 5.0, 3000, 24, 100);
  CHECK(other.L != est.L);
  CHECK(std::fabs(other.L - est.L) < 0.05);
}

TEST_CASE("critical coupling has vanishing exponent on the spectrum") {
  auto est = lyapunov_numeric(make_amo(1.0), kGolden, 0.0, 10000, 32, 7);
  CHECK(std::fabs(est.L) < 0.01);
}

TEST_CASE("supercritical coupling pins the exponent at log lambda") {
  // E in a band of the q = 89 approximant, lambda = 2: L = ln 2 on sigma.
  auto bands = union_spectrum(make_amo(2.0), Frac(55, 89), 1e-6);
  std::size_t widest = 0;
  for (std::size_t i = 0; i < bands.count(); ++i)
    if (bands.intervals()[i].length() > bands.intervals()[widest].length()) widest = i;
  double E = 0.5 * (bands.intervals()[widest].lo + bands.intervals()[widest].hi);
  auto est = lyapunov_numeric(make_amo(2.0), kGolden, E, 12000, 32, 5);
  CHECK(std::fabs(est.L - std::log(2.0)) < 0.02);
}

TEST_CASE("log b integrals") {
  CHECK(log_b_integral(make_amo(1.0)) == 0.0);
  CHECK(std::fabs(log_b_integral(make_chiral())) < 1e-8);

  TrigPoly zero;
  TrigPoly b4;
  b4.terms.push_back({1, 0.0, 4.0});  // 4 sin 2 pi x
  auto fam = make_custom("b4", zero, b4, 0.0, 8 * M_PI, {0.0, 0.5});
  CHECK(log_b_integral(fam) == doctest::Approx(std::log(2.0)).epsilon(1e-8));
}

TEST_CASE("non-simple zeros are refused") {
  TrigPoly zero;
  TrigPoly b;  // 1 - cos 2 pi x vanishes to second order at 0
  b.c0 = 1.0;
  b.terms.push_back({1, -1.0, 0.0});
  auto fam = make_custom("flat-zero", zero, b, 0.0, 2 * M_PI, {0.0});
  CHECK_THROWS_AS(log_b_integral(fam), NonsimpleZero);
}

TEST_CASE("thouless formula matches the direct estimator off the spectrum") {
  auto fam = make_amo(1.0);
  Frac f(55, 89);
  auto sigma = union_spectrum(fam, f, 1e-8);
  std::vector<double> grid;
  double lo = sigma.min() - 0.5, hi = sigma.max() + 0.5;
  for (int i = 0; i <= 1400; ++i) grid.push_back(lo + i * (hi - lo) / 1400);
  auto sample = ids(fam, f, grid, 96, 0);

  for (double E : {5.0, -4.8, 4.4}) {
    double shift = 0.0;
    double th = thouless_L(fam, sample, E, &shift);
    CHECK(shift < 1e-3);
    auto ly = lyapunov_numeric(fam, double(f.p) / double(f.q), E, 4000, 24, 31);
    CHECK(std::fabs(th - ly.L) < 1e-2);
  }
}

TEST_CASE("thouless value at the spectral center is near zero") {
  auto fam = make_amo(1.0);
  Frac f(55, 89);
  // E = 0 sits inside a band, so the periodic exponent vanishes there. The
  // grid must resolve the q = 89 bands (width ~1e-3) near the evaluation
  // point or the log kernel smears their mass by ~ln(h/w)/q.
  std::vector<double> grid;
  for (double e = -4.5; e < -0.35; e += 4.5e-3) grid.push_back(e);
  for (double e = -0.35; e < 0.35; e += 1e-4) grid.push_back(e);
  for (double e = 0.35; e <= 4.5; e += 4.5e-3) grid.push_back(e);
  auto sample = ids(fam, f, grid, 96, 0);
  CHECK(std::fabs(thouless_L(fam, sample, 0.0)) < 5e-3);
}

TEST_CASE("averaged estimator is nearly subadditive") {
  auto fam = make_amo(1.0);
  long n = 700;
  auto a = lyapunov_numeric(fam, kGolden, 4.0, n, 40, 11);
  auto b = lyapunov_numeric(fam, kGolden, 4.0, 2 * n, 40, 11);
  double slack = 2.0 / double(n) + 3.0 * (a.stderr_est + b.stderr_est);
  CHECK(b.L <= a.L + slack);
}
