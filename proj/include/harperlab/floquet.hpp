#pragma once

#include <Eigen/Dense>

#include <vector>

#include "harperlab/model.hpp"

namespace harperlab {

/**
 * The q x q Bloch reduction of a period-q Jacobi operator: diagonal v_n,
 * hops b_n to site n+1, and the wrap-around hop b_{q-1} carrying e^{ik}.
 * Entries accumulate, so q = 1 and q = 2 come out right (the two hop
 * directions can land on the same entry).
 */
struct FloquetMatrix {
  int q = 0;
  double theta = 0.0;
  double k = 0.0;
  Eigen::MatrixXcd m;
};

FloquetMatrix build_floquet(const SampledOperator& op, double k);
// Sorted eigenvalues at arbitrary Bloch momentum.
std::vector<double> floquet_eigs(const SampledOperator& op, double k);

// k = 0 (corner +b_{q-1}) or k = pi (corner -b_{q-1}): real symmetric.
// corner_sign is +1 for k=0, -1 for k=pi.
Eigen::MatrixXd floquet_real(const SampledOperator& op, int corner_sign);
std::vector<double> floquet_eigs_real(const SampledOperator& op, int corner_sign);

// Period-q coefficient arrays (v_0..v_{q-1}, b_0..b_{q-1}) of a rational-alpha operator.
struct PeriodCoeffs {
  std::vector<double> v;
  std::vector<double> b;
};
PeriodCoeffs period_coeffs(const SampledOperator& op);

// max|v| + 2 max|b| over the period: every Floquet eigenvalue lies in
// [-bound, bound] (Gershgorin).
double gershgorin_bound(const PeriodCoeffs& pc);

/**
 * Number of eigenvalues < x of the symmetric matrix tridiag(d, off) plus
 * corner entries c at (0, q-1) and (q-1, 0), by LDL^T inertia with a bordered
 * last column. Requires q >= 3 (smaller sizes are closed-form for callers).
 */
int cyclic_sturm_count(const std::vector<double>& d, const std::vector<double>& off,
                       double c, double x);

/**
 * r-th smallest (0-based) element of eig(T_{+c}) U eig(T_{-c}) as a multiset,
 * where T_{±c} = tridiag(d, off) ± corner c. Bisection on the summed inertia
 * counts inside [lo, hi]; the bracket must satisfy
 * count(lo) <= r < count(hi). Stops once the bracket is narrower than xtol
 * (0 bisects to machine precision).
 */
double union_rank_bisect(const std::vector<double>& d, const std::vector<double>& off,
                         double c, int r, double lo, double hi, double xtol = 0.0);

}  // namespace harperlab
