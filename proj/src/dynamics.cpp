#include "harperlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "harperlab/errors.hpp"

namespace harperlab {

namespace {

double fold_unit(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f -= 1.0;
  return f;
}

// Unsigned distance on the circle R/Z.
double circ_dist(double x, double y) {
  double d = std::fabs(fold_unit(x - y));
  return std::min(d, 1.0 - d);
}

}  // namespace

TransferState transfer_product(const CoefficientFamily& fam, double alpha,
                               double theta, double E, long n) {
  if (n < 1) throw std::invalid_argument("transfer_product: n must be >= 1");
  TransferState st;
  st.m.setIdentity();
  st.steps = n;
  double ph = fold_unit(theta);
  double b_prev = fam.b_at(fold_unit(ph - alpha));
  if (std::fabs(b_prev) <= kSingularThreshold)
    throw SingularPhase("transfer_product: b(theta - alpha) vanishes");
  for (long k = 0; k < n; ++k) {
    double bk = fam.b_at(ph);
    if (std::fabs(bk) <= kSingularThreshold)
      throw SingularPhase("transfer_product: b vanishes along the orbit");
    double vk = fam.v_at(ph);
    Eigen::Matrix2d A;
    A << (E - vk) / bk, -b_prev / bk, 1.0, 0.0;
    st.m = A * st.m;
    double norm = st.m.cwiseAbs().maxCoeff();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw std::runtime_error("transfer_product: degenerate step");
    st.m /= norm;
    st.log_scale += std::log(norm);
    b_prev = bk;
    ph = fold_unit(ph + alpha);
  }
  return st;
}

LyapunovEstimate lyapunov_numeric(const CoefficientFamily& fam, double alpha,
                                  double E, long n, int theta_count,
                                  std::uint64_t seed) {
  if (n < 100) throw std::invalid_argument("lyapunov_numeric: n must be >= 100");
  if (theta_count < 2)
    throw std::invalid_argument("lyapunov_numeric: need at least 2 phases");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<std::pair<double, double>> samples;  // (theta, per-step exponent)
  samples.reserve(theta_count);
  for (int i = 0; i < theta_count; ++i) {
    bool got = false;
    for (int attempt = 0; attempt < 64 && !got; ++attempt) {
      double theta = unif(rng);
      try {
        TransferState st = transfer_product(fam, alpha, theta, E, n);
        double val = (std::log(st.m.norm()) + st.log_scale) / double(n);
        samples.emplace_back(theta, val);
        got = true;
      } catch (const SingularPhase&) {
        // zero-measure set; redraw
      }
    }
    if (!got)
      throw SingularPhase("lyapunov_numeric: could not avoid singular phases");
  }
  // Fixed summation order regardless of how phases were produced.
  std::sort(samples.begin(), samples.end());
  double mean = 0.0;
  for (const auto& s : samples) mean += s.second;
  mean /= double(samples.size());
  double var = 0.0;
  for (const auto& s : samples) var += (s.second - mean) * (s.second - mean);
  var /= double(samples.size() - 1);

  LyapunovEstimate est;
  est.E = E;
  est.L = mean;
  est.stderr_est = std::sqrt(var / double(samples.size()));
  est.n = n;
  est.theta_samples = theta_count;
  return est;
}

namespace {

// Adaptive Simpson on [a,b] given precomputed endpoint/midpoint values.
double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double eps,
                   int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double eps) {
  if (b <= a) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, eps, 48);
}

}  // namespace

double log_b_integral(const CoefficientFamily& fam) {
  const auto& zeros = fam.b_zeros;
  if (zeros.empty()) {
    // b bounded away from zero on the whole circle.
    if (fam.b.terms.empty()) return std::log(std::fabs(fam.b.c0));
    return adaptive_simpson(
        [&](double x) { return std::log(std::fabs(fam.b_at(x))); }, 0.0, 1.0,
        1e-12);
  }

  std::vector<double> z(zeros.begin(), zeros.end());
  for (double& zi : z) zi = fold_unit(zi);
  std::sort(z.begin(), z.end());
  double min_gap = 1.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double next = (i + 1 < z.size()) ? z[i + 1] : z[0] + 1.0;
    min_gap = std::min(min_gap, next - z[i]);
  }
  if (min_gap <= 0.0)
    throw std::invalid_argument("log_b_integral: duplicate zeros of b");
  double delta = std::min(0.01, 0.25 * min_gap);

  std::vector<double> slope(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    slope[i] = std::fabs(fam.db_at(z[i]));
    if (slope[i] < 1e-8)
      throw NonsimpleZero("log_b_integral: zero of b with vanishing derivative");
  }

  // integral over [z-d, z+d] of ln|b'(z) (x-z)| dx = 2 d (ln(|b'| d) - 1)
  double total = 0.0;
  for (double s : slope) total += 2.0 * delta * (std::log(s * delta) - 1.0);

  // Remainder g = ln|b| minus the local model near each zero; g extends
  // continuously by 0 across the zeros themselves.
  auto g = [&](double x) {
    for (std::size_t i = 0; i < z.size(); ++i) {
      double d = circ_dist(x, z[i]);
      if (d < delta) {
        if (d < 1e-13) return 0.0;
        return std::log(std::fabs(fam.b_at(x))) - std::log(slope[i] * d);
      }
    }
    return std::log(std::fabs(fam.b_at(x)));
  };

  std::vector<double> cuts;
  for (double zi : z) {
    for (double c : {zi - delta, zi, zi + delta}) cuts.push_back(fold_unit(c));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double eps_per = 1e-12 / double(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    double a = cuts[i];
    double b = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + 1.0;
    total += adaptive_simpson(g, a, b, eps_per);
  }
  return total;
}

namespace {

double stieltjes_part(const IDSample& sample, double E, int stride) {
  const auto& g = sample.grid;
  const auto& N = sample.N;
  double acc = 0.0;
  for (std::size_t i = 0; i + stride < g.size(); i += stride) {
    std::size_t j = i + stride;
    double dN = N[j] - N[i];
    if (dN <= 0.0) continue;
    double mid = 0.5 * (g[i] + g[j]);
    double dist = std::fabs(E - mid);
    // The midpoint rule cannot resolve distances below the cell scale.
    double floor_d = 0.25 * (g[j] - g[i]);
    acc += dN * std::log(std::max(dist, floor_d));
  }
  return acc;
}

}  // namespace

double thouless_L(const CoefficientFamily& fam, const IDSample& sample, double E,
                  double* richardson_shift) {
  if (sample.grid.size() < 3 || sample.grid.size() != sample.N.size())
    throw std::invalid_argument("thouless_L: malformed IDS sample");
  double lb = log_b_integral(fam);
  double fine = stieltjes_part(sample, E, 1);
  if (richardson_shift) {
    double coarse = stieltjes_part(sample, E, 2);
    *richardson_shift = std::fabs(fine - coarse);
  }
  return fine - lb;
}

}  // namespace harperlab
