#pragma once

#include <string>
#include <vector>

#include "harperlab/contfrac.hpp"
#include "harperlab/interval_set.hpp"
#include "harperlab/model.hpp"

namespace harperlab {

class Cache;

// c = 32 Catalan / pi, the conjectured limit of q |sigma| at critical
// coupling along golden-tail frequencies.
inline constexpr double kCatalan = 0.915965594177219015;
double scaling_limit_c();

/**
 * The band set inflated by delta = C ln(q) / q^2 and re-merged. Invariants
 * checked on construction: every interval at least 2 delta long, at most 3q
 * intervals, total length within the bookkeeping bound
 * measure + 6 C ln(q)/q * (count/q).
 */
struct CoverReport {
  long q = 0;
  double C = 0.0;
  double delta = 0.0;
  std::vector<Interval> w;
  double total_length = 0.0;
  double sum_t(double t) const;  // sum of |w_m|^t
};

CoverReport inflate_cover(const BandSet& bands, long q, double C);

struct HausdorffSum {
  double sum = 0.0;           // sum |w_m|^t
  double holder_bound = 0.0;  // count^(1-t) total^t, must dominate sum
};

HausdorffSum hausdorff_sum(const CoverReport& cover, double t);

struct DimEstimate {
  std::vector<long> qs;
  std::vector<double> t_grid;
  std::vector<std::vector<double>> sums;  // sums[t index][q index]
  std::vector<double> box_log_invdelta;   // per q
  std::vector<double> box_logN;
  double t_star = 0.0;    // smallest grid t whose sums decrease over the last 3 q
  double box_slope = 0.0; // least-squares slope of log N against log 1/delta
};

/**
 * Upper-dimension evidence along a frequency sequence: covers at each
 * approximant, s-dimensional sums on a t grid, and a box-counting slope.
 * Needs at least three approximants (InsufficientData otherwise).
 */
DimEstimate dim_upper_estimate(const CoefficientFamily& fam,
                               const std::vector<Frac>& alphas,
                               const std::vector<double>& t_grid, double C,
                               double tol, Cache* cache = nullptr);

struct ScalingRow {
  int n = 0;
  long long p = 0, q = 0;
  double measure = 0.0;
  double q_measure = 0.0;
};

/**
 * q |sigma| along the convergents of alpha for the critical amo family.
 * Hard invariant: every row satisfies q |sigma| < 8e; violation throws
 * std::logic_error.
 */
struct ScalingTable {
  std::vector<ScalingRow> rows;
  double reference_c = 0.0;  // 32 Catalan / pi
};

ScalingTable thouless_scaling_table(const CFExpansion& alpha, int n_max,
                                    double tol, Cache* cache = nullptr);

struct ContinuityRow {
  int n = 0;
  long long q1 = 0, q2 = 0;
  double dalpha = 0.0;    // exact 1/(q1 q2)
  double d = 0.0;         // deviation of the finer spectrum from the coarser
  double edge_err = 0.0;  // combined edge defect of the two sweeps
  bool in_fit = true;
};

struct ContinuityFit {
  std::vector<ContinuityRow> rows;
  double gamma = 0.0;  // slope of log d against log dalpha
  double K = 0.0;      // exp(intercept)
  std::string note;
};

/**
 * Spectral continuity in the frequency: one-sided deviations
 * sup_{x in sigma(alpha_{n+1})} dist(x, sigma(alpha_n)) against the exact
 * frequency increments, fit to d ~ K dalpha^gamma. The one-sided form
 * tracks how far spectrum points move, without the newly opened gaps of
 * the finer approximant masking the rate. Fewer than two usable pairs
 * throws InsufficientData.
 */
ContinuityFit continuity_fit(const CoefficientFamily& fam,
                             const CFExpansion& alpha, int n_lo, int n_hi,
                             double tol, Cache* cache = nullptr);

struct AubryRow {
  int n = 0;
  long long q = 0;
  double measure = 0.0;
  double deviation = 0.0;  // |measure - 4|1 - lambda||
};

struct AubryTable {
  double lambda = 0.0;
  double target = 0.0;  // 4 |1 - lambda|
  std::vector<AubryRow> rows;
  bool deviations_decreasing = false;  // over rows with q >= 5
  double final_relative = 0.0;         // last deviation / target
};

// Off-critical total bandwidth against the Aubry-Andre limit 4|1 - lambda|.
// lambda must be positive and away from 1.
AubryTable aubry_andre_check(double lambda, const CFExpansion& alpha, int n_max,
                             double tol, Cache* cache = nullptr);

}  // namespace harperlab
