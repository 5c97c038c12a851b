#pragma once

#include <string>
#include <utility>
#include <vector>

#include "harperlab/interval_set.hpp"
#include "harperlab/rational.hpp"

namespace harperlab {

/**
 * Exact phase e^{2 pi i (r + s a)} with the frequency a kept symbolic.
 * Two phases agree symbolically when r differs by an integer and s matches
 * exactly; at a rational frequency p/q they agree when r + s p/q differs
 * by an integer.
 */
struct PhaseExponent {
  BigRat r, s;
  PhaseExponent operator+(const PhaseExponent& o) const { return {r + o.r, s + o.s}; }
  bool equals_symbolic(const PhaseExponent& o) const;
  bool equals_at(const PhaseExponent& o, const Frac& alpha) const;
};

// Plane-wave basis label: site k, Fourier mode m. The mode is stored
// doubled (m2 = 2m) so half-integer shifts stay exact integers.
struct BasisState {
  BigInt k;
  BigInt m2;
  bool operator==(const BasisState& o) const { return k == o.k && m2 == o.m2; }
};

struct Generator {
  enum class Kind { T, Tinv, S, U, R };
  Kind kind;
  BigRat x;  // power for S^x / U_x; unused for T, T^-1, R
};

Generator gen_T();
Generator gen_Tinv();
Generator gen_S(const BigRat& x);
Generator gen_U(const BigRat& x);
Generator gen_R();

/**
 * Product of generators times a fixed phase. The word is stored as
 * written, leftmost factor first, and acts on states right to left.
 * Actions on |k, m>:
 *   T        -> |k-1, m>
 *   S^x      -> e^{2 pi i x k a} |k, m+x>
 *   U_x      -> e^{pi i x k^2 a} |k, m+xk>
 *   R        -> e^{-2 pi i k m a} |m, -k>      (integer m only)
 */
struct MonomialOp {
  std::vector<Generator> word;
  PhaseExponent prefactor{BigRat(0), BigRat(0)};
};

// Apply op to a basis state. Throws HalfIntegerMode when R meets a
// half-integer mode, and std::invalid_argument if a mode shift would leave
// the half-integer lattice.
std::pair<PhaseExponent, BasisState> apply_word(const MonomialOp& op,
                                                const BasisState& st);

struct AlphaSpec {
  bool symbolic = true;
  Frac value{0, 1};
  static AlphaSpec sym() { return AlphaSpec{}; }
  static AlphaSpec rational(const Frac& f) { return AlphaSpec{false, f}; }
  std::string label() const;
};

struct RelationReport {
  std::string name;
  std::string alpha;
  long pass = 0, fail = 0, skipped = 0;
  std::vector<std::string> witnesses;  // first few failure details
  bool ok() const { return fail == 0 && pass > 0; }
};

struct NamedRelation {
  std::string name;
  MonomialOp lhs, rhs;
};

// Every defining relation of the algebra, with the power variants of the
// parameterized ones expanded.
const std::vector<NamedRelation>& relation_table();

// Exhaustive check of lhs == rhs on all |k, m> with k, m integers in the
// given inclusive ranges. States where either side trips the R domain
// restriction count as skipped, never as pass.
RelationReport verify_relation(const NamedRelation& rel,
                               std::pair<long, long> k_range,
                               std::pair<long, long> m_range,
                               const AlphaSpec& alpha);

/**
 * Conjugation by Q = U_1 R U_{1/2} permutes {T^2, T^-2, S, S^-1} up to
 * explicit phases: on each basis state the four pairs (phase, state) from
 * Q T^2, Q T^-2, Q S, Q S^-1 must equal, as a multiset, the four from
 * e^{i pi a} S T Q, e^{i pi a} S^-1 T^-1 Q, e^{-i pi a} S T^-1 Q,
 * e^{-i pi a} S^-1 T Q. No pairing is assumed.
 */
RelationReport verify_conjugation(std::pair<long, long> k_range,
                                  std::pair<long, long> m_range,
                                  const AlphaSpec& alpha);

struct IsospectralReport {
  Frac input;            // chiral frequency p/q
  Frac doubled;          // 2p/q reduced, used on the amo side
  double distance = 0.0; // Hausdorff distance between the two spectra
  double tol = 0.0;
  bool pass = false;
  BandSet amo_bands, chiral_bands;
  double amo_edge_defect = 0.0, chiral_edge_defect = 0.0;
};

// sigma(amo, lambda=1, 2p/q) versus sigma(shifted chiral, p/q), both swept
// with per-edge certificates at tol; passes when the Hausdorff distance is
// at most 2 tol.
IsospectralReport isospectral_check(const Frac& pq, double tol);

// sup over the grid of |N_amo(2p/q) - N_chiral(p/q)|.
double ids_equality_check(const Frac& pq, const std::vector<double>& E_grid,
                          int theta_samples);

}  // namespace harperlab
