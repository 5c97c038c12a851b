#pragma once

#include <cstddef>
#include <vector>

#include "harperlab/rational.hpp"

namespace harperlab {

/**
 * One canonical approximant p_n/q_n of a continued fraction
 * [0; a_1, a_2, ...], together with the coefficient that produced it and
 * omega(n) = 1/(q_n q_{n+1}) when the next denominator is known.
 */
struct Convergent {
  int n = 0;
  BigInt p;
  BigInt q;
  BigInt a;
  double omega = 0.0;   // valid iff has_omega
  bool has_omega = false;
};

/**
 * A continued-fraction source: either an explicit coefficient stream
 * (optionally repeating, for quadratic irrationals) or an exact rational
 * enclosure [value - radius, value + radius] of a real in (0,1).
 *
 * Coefficients from an enclosure are emitted only when every point of the
 * current remainder interval yields the same next coefficient; otherwise
 * PrecisionExhausted is thrown. A remainder that vanishes exactly means the
 * input was rational and further coefficients do not exist.
 */
class CFExpansion {
 public:
  static CFExpansion from_coefficients(std::vector<BigInt> terms, bool repeat = false);
  static CFExpansion golden();                       // (sqrt5-1)/2 = [0;1,1,1,...]
  static CFExpansion silver();                       // sqrt2-1    = [0;2,2,2,...]
  static CFExpansion from_value(BigRat value, BigRat radius);
  static CFExpansion from_decimal(const std::string& text);  // exact, radius 0

  // First `count` coefficients a_1..a_count.
  std::vector<BigInt> coefficients(std::size_t count) const;

  // Longest available prefix of a_1..a_count: a terminating (rational) input
  // or a finite stream truncates cleanly. Ambiguity from an inexact
  // enclosure still throws PrecisionExhausted.
  std::vector<BigInt> coefficients_up_to(std::size_t count) const;

  bool has_value() const { return has_value_; }
  const BigRat& value() const { return value_; }

 private:
  CFExpansion() = default;
  std::vector<BigInt> expand(std::size_t count, bool stop_at_end) const;
  std::vector<BigInt> stream_;
  bool repeat_ = false;
  bool has_value_ = false;
  BigRat value_;
  BigRat radius_;
};

std::vector<BigInt> cf_expand(const CFExpansion& cf, std::size_t count);

// Convergents p_1/q_1 .. p_count/q_count via the standard recurrence
// p_{n+1} = a_{n+1} p_n + p_{n-1}, seeded with p_0/q_0 = 0/1 and p_{-1}/q_{-1} = 1/0.
// omega is filled for n < count.
std::vector<Convergent> convergents(const CFExpansion& cf, std::size_t count);
std::vector<Convergent> convergents_from_coeffs(const std::vector<BigInt>& a);

// Reduced machine-word form of a convergent; throws if it does not fit.
Frac to_frac(const Convergent& c);

}  // namespace harperlab
