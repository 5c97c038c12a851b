#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "harperlab/model.hpp"
#include "harperlab/spectral.hpp"

namespace harperlab {

/**
 * Renormalized transfer-matrix product: the true n-step matrix is
 * m * exp(log_scale), with the stored m kept at unit max-entry so products
 * of any length stay representable.
 */
struct TransferState {
  Eigen::Matrix2d m;
  double log_scale = 0.0;
  long steps = 0;
};

// A^E_n(theta) = A(theta+(n-1)alpha) ... A(theta), with
// A(x) = (1/b(x)) [[E - v(x), -b(x-alpha)], [b(x), 0]].
// Throws SingularPhase if any |b| along the way is at or below threshold.
TransferState transfer_product(const CoefficientFamily& fam, double alpha,
                               double theta, double E, long n);

struct LyapunovEstimate {
  double E = 0.0;
  double L = 0.0;          // nats per step
  double stderr_est = 0.0; // Monte-Carlo standard error
  long n = 0;
  int theta_samples = 0;
};

/**
 * Monte-Carlo phase average of (1/n) ln ||A^E_n(theta)||. Phases are drawn
 * from a seeded generator, resampled (bounded retries) when they hit a
 * singular phase, then summed in sorted order so the result does not depend
 * on evaluation order.
 */
LyapunovEstimate lyapunov_numeric(const CoefficientFamily& fam, double alpha,
                                  double E, long n, int theta_count,
                                  std::uint64_t seed);

/**
 * Integral of ln|b| over one period. Each simple zero z contributes the
 * closed-form integral of ln|b'(z)(x - z)| over [z-delta, z+delta]; the rest
 * integrates a bounded smooth remainder. Throws NonsimpleZero when a listed
 * zero has |b'| below threshold.
 */
double log_b_integral(const CoefficientFamily& fam);

/**
 * Thouless formula: L(E) = -integral ln|b| + integral ln|E - E'| dN(E').
 * The Stieltjes part is a midpoint sum over the IDS grid increments; if
 * richardson_shift is given it receives |value - value on the coarsened
 * grid| as a quadrature-stability indicator.
 */
double thouless_L(const CoefficientFamily& fam, const IDSample& sample, double E,
                  double* richardson_shift = nullptr);

}  // namespace harperlab
