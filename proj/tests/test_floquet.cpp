#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "harperlab/floquet.hpp"
#include "harperlab/model.hpp"
#include "harperlab/spectral.hpp"

using namespace harperlab;

TEST_CASE("q = 1 fiber is the scalar v + 2 b cos k") {
  auto op = make_op(make_amo(1.5), Frac(0, 1), 0.2);
  for (double k : {0.0, 1.0, M_PI}) {
    auto e = floquet_eigs(op, k);
    REQUIRE(e.size() == 1);
    double want = 2 * 1.5 * std::cos(2 * M_PI * 0.2) + 2.0 * std::cos(k);
    CHECK(e[0] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("q = 2 fiber matches the closed form") {
  // alpha = 1/2: v_1 = -v_0, b = 1; eigenvalues +-sqrt(v_0^2 + 2 + 2 cos k).
  double theta = 0.13;
  auto op = make_op(make_amo(1.0), Frac(1, 2), theta);
  double v0 = 2 * std::cos(2 * M_PI * theta);
  for (double k : {0.0, 0.7, 2.0, M_PI}) {
    auto e = floquet_eigs(op, k);
    REQUIRE(e.size() == 2);
    double root = std::sqrt(v0 * v0 + 2 + 2 * std::cos(k));
    CHECK(e[0] == doctest::Approx(-root).epsilon(1e-12));
    CHECK(e[1] == doctest::Approx(root).epsilon(1e-12));
  }
}

TEST_CASE("real corner matrices agree with the complex builder at k = 0, pi") {
  auto op = make_op(make_chiral(), Frac(2, 5), 0.17);
  auto e0c = floquet_eigs(op, 0.0);
  auto e0r = floquet_eigs_real(op, +1);
  auto epc = floquet_eigs(op, M_PI);
  auto epr = floquet_eigs_real(op, -1);
  REQUIRE(e0c.size() == e0r.size());
  for (std::size_t i = 0; i < e0c.size(); ++i) {
    CHECK(e0r[i] == doctest::Approx(e0c[i]).epsilon(1e-10));
    CHECK(epr[i] == doctest::Approx(epc[i]).epsilon(1e-10));
  }
}

TEST_CASE("hermiticity and k-periodicity of the fiber") {
  auto op = make_op(make_amo(0.7), Frac(3, 8), 0.31);
  auto fm = build_floquet(op, 1.234);
  CHECK((fm.m - fm.m.adjoint()).norm() < 1e-13);
  auto e1 = floquet_eigs(op, 1.234);
  auto e2 = floquet_eigs(op, 1.234 + 2 * M_PI);
  for (std::size_t i = 0; i < e1.size(); ++i)
    CHECK(e1[i] == doctest::Approx(e2[i]).epsilon(1e-12));
  // k and -k fibers are conjugate, hence isospectral.
  auto e3 = floquet_eigs(op, -1.234);
  for (std::size_t i = 0; i < e1.size(); ++i)
    CHECK(e1[i] == doctest::Approx(e3[i]).epsilon(1e-12));
}

TEST_CASE("discriminant crosses +-2 exactly at corner eigenvalues") {
  auto op = make_op(make_amo(1.0), Frac(2, 5), 0.3);
  auto pc = period_coeffs(op);
  for (double E : floquet_eigs_real(op, +1))
    CHECK(std::fabs(discriminant_from_coeffs(pc, E)) == doctest::Approx(2.0).epsilon(1e-7));
  for (double E : floquet_eigs_real(op, -1))
    CHECK(std::fabs(discriminant_from_coeffs(pc, E)) == doctest::Approx(2.0).epsilon(1e-7));
  // Between the k = 0 and k = pi edges of one band, |Delta| < 2.
  auto e0 = floquet_eigs_real(op, +1);
  auto ep = floquet_eigs_real(op, -1);
  double mid = 0.5 * (e0[0] + ep[0]);
  CHECK(std::fabs(discriminant_from_coeffs(pc, mid)) < 2.0);
}

TEST_CASE("frozen discriminant value") {
  // Period-2 critical point: Delta(0) at alpha = 1/2, theta = 0.1 equals
  // -2 - v0^2 with v0 = 2 cos(pi/5); hand value frozen.
  double val = discriminant(make_amo(1.0), Frac(1, 2), 0.1, 0.0);
  CHECK(val == doctest::Approx(-4.618033988749895).epsilon(1e-12));
}

TEST_CASE("sturm count against dense eigenvalues") {
  for (auto frac : {Frac(2, 5), Frac(3, 7), Frac(5, 8)}) {
    auto op = make_op(make_amo(1.0), frac, 0.41);
    auto pc = period_coeffs(op);
    std::vector<double> off(pc.b.begin(), pc.b.end() - 1);
    double c = pc.b.back();
    for (int sign : {+1, -1}) {
      auto dense = floquet_eigs_real(op, sign);
      for (double x : {-4.0, -2.2, -0.9, 0.0, 0.8, 2.5, 4.0}) {
        int want = int(std::lower_bound(dense.begin(), dense.end(), x) - dense.begin());
        CHECK(cyclic_sturm_count(pc.v, off, sign * c, x) == want);
      }
    }
  }
}

TEST_CASE("rank bisection returns sorted union eigenvalues") {
  auto op = make_op(make_chiral(), Frac(3, 7), 0.23);
  auto pc = period_coeffs(op);
  std::vector<double> off(pc.b.begin(), pc.b.end() - 1);
  double c = pc.b.back();
  auto e0 = floquet_eigs_real(op, +1);
  auto ep = floquet_eigs_real(op, -1);
  std::vector<double> all;
  all.insert(all.end(), e0.begin(), e0.end());
  all.insert(all.end(), ep.begin(), ep.end());
  std::sort(all.begin(), all.end());
  double g = gershgorin_bound(pc) + 1.0;
  for (int r = 0; r < int(all.size()); ++r) {
    double x = union_rank_bisect(pc.v, off, c, r, -g, g);
    CHECK(x == doctest::Approx(all[r]).epsilon(1e-9));
  }
}

TEST_CASE("rank bisection honors the stopping width") {
  auto op = make_op(make_amo(1.0), Frac(1, 3), 0.37);
  auto pc = period_coeffs(op);
  std::vector<double> off(pc.b.begin(), pc.b.end() - 1);
  double c = pc.b.back();
  double g = gershgorin_bound(pc) + 1.0;
  double exact = union_rank_bisect(pc.v, off, c, 2, -g, g);
  double coarse = union_rank_bisect(pc.v, off, c, 2, -g, g, 1e-3);
  CHECK(std::fabs(exact - coarse) <= 1e-3);
}

TEST_CASE("gershgorin bound dominates the spectrum") {
  auto op = make_op(make_chiral(), Frac(5, 8), 0.11);
  auto pc = period_coeffs(op);
  double g = gershgorin_bound(pc);
  for (int sign : {+1, -1})
    for (double E : floquet_eigs_real(op, sign)) {
      CHECK(E <= g + 1e-12);
      CHECK(E >= -g - 1e-12);
    }
}
