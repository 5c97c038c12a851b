#include "harperlab/floquet.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace harperlab {

namespace {
int period_of(const SampledOperator& op) {
  if (!op.rational) throw std::invalid_argument("Floquet reduction needs rational alpha");
  return static_cast<int>(op.alpha_frac.q);
}
}  // namespace

PeriodCoeffs period_coeffs(const SampledOperator& op) {
  int q = period_of(op);
  PeriodCoeffs pc;
  pc.v.resize(q);
  pc.b.resize(q);
  for (int n = 0; n < q; ++n) {
    pc.v[n] = op.v_n(n);
    pc.b[n] = op.b_n(n);
  }
  return pc;
}

double gershgorin_bound(const PeriodCoeffs& pc) {
  double mv = 0.0, mb = 0.0;
  for (double v : pc.v) mv = std::max(mv, std::abs(v));
  for (double b : pc.b) mb = std::max(mb, std::abs(b));
  return mv + 2.0 * mb;
}

FloquetMatrix build_floquet(const SampledOperator& op, double k) {
  int q = period_of(op);
  PeriodCoeffs pc = period_coeffs(op);
  FloquetMatrix fm;
  fm.q = q;
  fm.theta = op.theta;
  fm.k = k;
  fm.m = Eigen::MatrixXcd::Zero(q, q);
  for (int n = 0; n < q; ++n) fm.m(n, n) = pc.v[n];
  const std::complex<double> bloch = std::polar(1.0, k);
  for (int n = 0; n < q; ++n) {
    int j = (n + 1) % q;
    std::complex<double> amp = pc.b[n] * (n == q - 1 ? bloch : 1.0);
    fm.m(j, n) += amp;
    fm.m(n, j) += std::conj(amp);
  }
  return fm;
}

std::vector<double> floquet_eigs(const SampledOperator& op, double k) {
  FloquetMatrix fm = build_floquet(op, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fm.m, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + fm.q);
  return out;
}

Eigen::MatrixXd floquet_real(const SampledOperator& op, int corner_sign) {
  int q = period_of(op);
  PeriodCoeffs pc = period_coeffs(op);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(q, q);
  for (int n = 0; n < q; ++n) m(n, n) = pc.v[n];
  for (int n = 0; n < q; ++n) {
    int j = (n + 1) % q;
    double amp = pc.b[n] * (n == q - 1 ? corner_sign : 1);
    m(j, n) += amp;
    m(n, j) += amp;
  }
  return m;
}

std::vector<double> floquet_eigs_real(const SampledOperator& op, int corner_sign) {
  Eigen::MatrixXd m = floquet_real(op, corner_sign);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  return out;
}

namespace {

// One LDL^T inertia pass with a bordered last column. Sets *degenerate when
// a pivot had to be clamped or the final pivot lost its sign: the bordered
// fill f^2/p then carries an O(1/tiny) perturbation, so unlike the plain
// tridiagonal Sturm count the result is not backward-stable at that x.
int sturm_pass(const std::vector<double>& d, const std::vector<double>& off,
               double c, double x, double tiny, bool* degenerate) {
  const int q = static_cast<int>(d.size());
  int neg = 0;
  double t = d[0] - x;   // running pivot
  double f = c;          // fill entry (row, q-1)
  double s = 0.0;        // accumulated correction to (q-1, q-1)
  for (int i = 0; i <= q - 3; ++i) {
    double p = t;
    if (std::abs(p) < tiny) {
      p = (p < 0 ? -tiny : tiny);
      *degenerate = true;
    }
    if (p < 0) ++neg;
    t = (d[i + 1] - x) - off[i] * off[i] / p;
    double base = (i + 1 == q - 2) ? off[q - 2] : 0.0;
    double fnew = base - off[i] * f / p;
    s += f * f / p;
    f = fnew;
  }
  // i = q-2: last elimination; f currently holds the (q-2, q-1) entry
  double p = t;
  if (std::abs(p) < tiny) {
    p = (p < 0 ? -tiny : tiny);
    *degenerate = true;
  }
  if (p < 0) ++neg;
  double last = (d[q - 1] - x) - s - f * f / p;
  if (std::abs(last) < tiny) *degenerate = true;
  if (last < 0) ++neg;
  return neg;
}

}  // namespace

int cyclic_sturm_count(const std::vector<double>& d, const std::vector<double>& off,
                       double c, double x) {
  const int q = static_cast<int>(d.size());
  if (q < 3) throw std::invalid_argument("cyclic_sturm_count: q must be >= 3");
  if (static_cast<int>(off.size()) != q - 1)
    throw std::invalid_argument("cyclic_sturm_count: off size must be q-1");

  // scale-aware floor for zero pivots
  double scale = std::abs(x);
  for (double t : d) scale = std::max(scale, std::abs(t));
  for (double t : off) scale = std::max(scale, std::abs(t));
  scale = std::max(scale, std::abs(c));
  const double tiny = std::max(scale, 1.0) * 1e-290;

  bool degenerate = false;
  int neg = sturm_pass(d, off, c, x, tiny, &degenerate);
  // A clamped pivot means x sits on a singular leading minor (for instance
  // x = 0 with an identically zero diagonal). Step just below the singular
  // point, where the count is exact again; the shift only moves the
  // abscissa by ~1e-13 of the data scale, far under any bisection target.
  double delta = std::max(scale, 1.0) * 1e-13;
  for (int retry = 0; degenerate && retry < 6; ++retry) {
    degenerate = false;
    neg = sturm_pass(d, off, c, x - delta, tiny, &degenerate);
    delta *= 16.0;
  }
  return neg;
}

double union_rank_bisect(const std::vector<double>& d, const std::vector<double>& off,
                         double c, int r, double lo, double hi, double xtol) {
  auto count = [&](double x) {
    return cyclic_sturm_count(d, off, c, x) + cyclic_sturm_count(d, off, -c, x);
  };
  if (!(lo < hi)) throw std::invalid_argument("union_rank_bisect: bad bracket");
  if (count(lo) > r || count(hi) <= r)
    throw std::invalid_argument("union_rank_bisect: bracket does not isolate rank");
  for (int it = 0; it < 200; ++it) {
    double floor_w = std::max(xtol, 5e-16 * (1.0 + std::abs(lo) + std::abs(hi)));
    if (hi - lo <= floor_w) break;
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count(mid) <= r)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace harperlab
