#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "harperlab/errors.hpp"

namespace harperlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline double to_double(const BigRat& x) { return x.template convert_to<double>(); }
inline double to_double(const BigInt& x) { return x.template convert_to<double>(); }

// Exact rational value of a finite double.
inline BigRat rat_from_double(double d) {
  if (!std::isfinite(d)) throw std::invalid_argument("rat_from_double: non-finite");
  int exp = 0;
  double m = std::frexp(d, &exp);  // d = m * 2^exp, |m| in [0.5, 1)
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  exp -= 53;
  BigRat r(mant);
  if (exp >= 0) {
    r *= BigRat(BigInt(1) << exp);
  } else {
    r /= BigRat(BigInt(1) << (-exp));
  }
  return r;
}

// Parses a plain decimal literal ("0.3", ".25", "0.618033988749894903")
// into the exact rational it denotes.
inline BigRat parse_decimal(const std::string& text) {
  std::string s = text;
  bool neg = false;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = (s[i] == '-');
    ++i;
  }
  BigInt num = 0;
  BigInt den = 1;
  bool seen_digit = false;
  bool seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("parse_decimal: two dots in " + text);
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
      seen_digit = true;
    } else {
      throw std::invalid_argument("parse_decimal: bad character in " + text);
    }
  }
  if (!seen_digit) throw std::invalid_argument("parse_decimal: no digits in " + text);
  BigRat r(num, den);
  return neg ? -r : r;
}

// Reduced fraction with machine-word components, for rational frequencies p/q.
struct Frac {
  std::int64_t p = 0;
  std::int64_t q = 1;

  Frac() = default;
  Frac(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("Frac: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    p = num / g;
    q = den / g;
  }

  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  bool operator==(const Frac& o) const { return p == o.p && q == o.q; }
  bool operator<(const Frac& o) const {
    // exact cross comparison, no overflow for the q ranges used here
    return static_cast<__int128>(p) * o.q < static_cast<__int128>(o.p) * q;
  }
};

// p/q -> 2p/q in reduced form.
inline Frac double_fraction(const Frac& f) { return Frac(2 * f.p, f.q); }

// "p/q" or a bare integer.
inline Frac parse_frac(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Frac(std::stoll(text), 1);
    return Frac(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw UsageError("bad fraction: " + text);
  }
}

}  // namespace harperlab
