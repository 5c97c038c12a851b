#pragma once

#include <cstdint>
#include <vector>

#include "harperlab/floquet.hpp"
#include "harperlab/interval_set.hpp"
#include "harperlab/model.hpp"

namespace harperlab {

class Cache;

// |b_n(theta)| at or below this decouples the fiber into finite blocks.
inline constexpr double kSingularThreshold = 1e-12;

/**
 * Trace of the q-step transfer matrix at phase theta. The product is
 * renormalized en route, so values up to about e^700 come back finite.
 * Throws SingularPhase if any |b_n(theta)| <= threshold.
 */
double discriminant(const CoefficientFamily& fam, const Frac& alpha, double theta, double E);
double discriminant_from_coeffs(const PeriodCoeffs& pc, double E);

/**
 * Spectrum of the single-phase fiber: {E : |Delta(E)| <= 2} from Floquet
 * eigenvalues at k = 0 and k = pi, or the decoupled-block point spectrum
 * when b vanishes somewhere on the period (then the fiber does not depend
 * on k at all).
 */
BandSet fiber_spectrum(const CoefficientFamily& fam, const Frac& alpha, double theta);

struct UnionOptions {
  double edge_tol = 0.0;        // per-edge certificate; 0 derives tol/(4q)
  long max_evals = 1000000;     // refinement budget beyond the base grid
  bool best_effort = false;     // exhausted budget: return with defect instead of throwing
  int base_grid = 0;            // theta samples in the base grid; 0 picks 2q+1
};

struct UnionReport {
  BandSet bands;        // outer bounds; always contains the true union
  BandSet bands_inner;  // best sampled edges; accurate but uncertified
  double measure_defect = 0.0;  // certified bound on measure(U) - measure(sigma)
  double edge_defect = 0.0;     // certified bound on any edge displacement
  bool certified = true;
  bool fast_path = false;
  long evals = 0;
};

/**
 * Direct-sum spectrum over theta: a BandSet U with sigma(M) inside U and
 * measure(U) - measure(sigma) <= tol. Containment holds unconditionally;
 * the tolerance side is certified by Lipschitz cones on the 2q sorted
 * band-edge functions of theta (motion bound sup|v'| + 2 sup|b'|).
 * The amo family takes an exact fast path through the theta-independent
 * part of the discriminant.
 */
BandSet union_spectrum(const CoefficientFamily& fam, const Frac& alpha, double tol);
UnionReport union_spectrum_report(const CoefficientFamily& fam, const Frac& alpha,
                                  double tol, const UnionOptions& opt = {});

struct IDSample {
  std::vector<double> grid;  // sorted energies
  std::vector<double> N;     // values in [0,1], nondecreasing
};

/**
 * Integrated density of states on a fixed energy grid, averaged over
 * theta_samples midpoint phases. k_samples = 0 integrates the Bloch
 * momentum exactly through the discriminant (arccos of Delta/2 inside each
 * band); k_samples > 0 instead averages eigenvalue counts over that many
 * k samples.
 */
IDSample ids(const CoefficientFamily& fam, const Frac& alpha,
             const std::vector<double>& E_grid, int theta_samples, int k_samples);

struct ButterflyEntry {
  Frac frac;
  BandSet bands;
  bool budget_exceeded = false;
};

// All reduced p/q with 1 <= p < q <= q_max, sorted by value; budget
// failures flag their entry without stopping the sweep.
std::vector<ButterflyEntry> butterfly(const CoefficientFamily& fam, int q_max,
                                      double tol, Cache* cache = nullptr,
                                      int workers = 1);

struct GapReport {
  struct Gap {
    Interval span;                 // gap interior between adjacent bands
    int count = 0;                 // persisting isolated eigenvalues inside
    std::vector<double> energies;
    bool inconclusive = false;     // more than 2 persisted at both sizes
  };
  std::vector<Gap> gaps;
  BandSet bands;                   // fiber bands used for classification
  bool inconclusive = false;
};

/**
 * Eigenvalues of the N x N upper-left finite section, classified against the
 * fiber bands at the same phase. Gap-interior eigenvalues that persist
 * between two truncation sizes (N and N + q + 1, so the far boundary phase
 * moves while the near one stays) are counted per gap.
 */
GapReport halfline_gap_count(const CoefficientFamily& fam, const Frac& alpha,
                             double theta, int N_trunc, double edge_buffer = 1e-3);

}  // namespace harperlab
