#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "harperlab/rational.hpp"

namespace harperlab {

/**
 * Real trigonometric polynomial c0 + sum_j (c_j cos(2 pi j x) + s_j sin(2 pi j x)),
 * 1-periodic by construction. This is the whole function space for coefficient
 * functions: closed under phase shifts and differentiable in closed form.
 */
struct TrigPoly {
  struct Harmonic {
    int j = 1;
    double cos_c = 0.0;
    double sin_c = 0.0;
  };
  double c0 = 0.0;
  std::vector<Harmonic> terms;

  double eval(double x) const;
  double deriv(double x) const;
  // sum_j 2 pi j (|c_j| + |s_j|); exact sup for a single pure harmonic.
  double deriv_sup() const;
  // f(x) -> f(x + offset), expanded back into harmonic coefficients.
  TrigPoly shifted(double offset) const;
  bool is_constant() const { return terms.empty(); }
};

enum class FamilyKind { Amo, Chiral, ShiftedChiral, Custom };

/**
 * A Jacobi coefficient pair (v, b) on the unit circle with certified
 * derivative bounds and the zero set of b. The derivative bounds feed the
 * eigenvalue-motion bound sup|v'| + 2 sup|b'| used by the band sweeps.
 */
struct CoefficientFamily {
  FamilyKind kind = FamilyKind::Custom;
  std::string name;
  TrigPoly v;
  TrigPoly b;
  double v_deriv_max = 0.0;
  double b_deriv_max = 0.0;
  std::vector<double> b_zeros;  // positions in [0,1)
  double lambda = 0.0;          // coupling, meaningful for the amo kind only

  double v_at(double x) const { return v.eval(x); }
  double b_at(double x) const { return b.eval(x); }
  double db_at(double x) const { return b.deriv(x); }
  // Lipschitz bound for the motion of any Floquet eigenvalue in theta.
  double motion_bound() const { return v_deriv_max + 2.0 * b_deriv_max; }
};

// v = 2 lambda cos(2 pi x), b = 1.
CoefficientFamily make_amo(double lambda);
// v = 0, b = 2 sin(2 pi x); zeros at 0 and 1/2.
CoefficientFamily make_chiral();
// Chiral family with the phase offset 1/4 + alpha/2 folded into b.
CoefficientFamily make_shifted_chiral(double alpha);
CoefficientFamily make_shifted_chiral(const Frac& alpha);
// Validates the stated zero list and derivative bounds by falsification;
// throws std::invalid_argument on any violation.
CoefficientFamily make_custom(std::string name, TrigPoly v, TrigPoly b,
                              double v_deriv_max, double b_deriv_max,
                              std::vector<double> b_zeros);

// "amo:1.0" | "chiral" | "custom:<json file>"; used by the CLI.
CoefficientFamily parse_model_spec(const std::string& spec);
// JSON document form of a custom family (no code execution, trig data only).
CoefficientFamily family_from_json_text(const std::string& text);

// A canonical short token for cache keys and output headers.
std::string family_token(const CoefficientFamily& fam);

/**
 * One operator of the family: phases theta + n alpha. For rational alpha the
 * phase arithmetic is done mod q in integers, so n-periodicity is exact.
 */
struct SampledOperator {
  CoefficientFamily family;
  bool rational = false;
  Frac alpha_frac{0, 1};
  double alpha = 0.0;
  double theta = 0.0;

  double phase(std::int64_t n) const;
  double v_n(std::int64_t n) const { return family.v_at(phase(n)); }
  double b_n(std::int64_t n) const { return family.b_at(phase(n)); }
};

SampledOperator make_op(CoefficientFamily fam, const Frac& alpha, double theta);
SampledOperator make_op(CoefficientFamily fam, double alpha, double theta);

// Paired sequences (v_n), (b_n) for n in [n0, n1].
std::pair<std::vector<double>, std::vector<double>>
sample_coeffs(const SampledOperator& op, std::int64_t n0, std::int64_t n1);

}  // namespace harperlab
