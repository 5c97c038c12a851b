#include "harperlab/contfrac.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <limits>
#include <utility>

namespace harperlab {

namespace {

BigInt rat_floor(const BigRat& x) {
  BigInt n = numerator(x);
  BigInt d = denominator(x);
  BigInt q = n / d;
  if (n < 0 && q * d != n) --q;
  return q;
}

}  // namespace

CFExpansion CFExpansion::from_coefficients(std::vector<BigInt> terms, bool repeat) {
  if (terms.empty()) throw std::invalid_argument("CFExpansion: empty coefficient stream");
  for (const auto& a : terms)
    if (a < 1) throw std::invalid_argument("CFExpansion: coefficients must be >= 1");
  CFExpansion cf;
  cf.stream_ = std::move(terms);
  cf.repeat_ = repeat;
  return cf;
}

CFExpansion CFExpansion::golden() { return from_coefficients({BigInt(1)}, true); }
CFExpansion CFExpansion::silver() { return from_coefficients({BigInt(2)}, true); }

CFExpansion CFExpansion::from_value(BigRat value, BigRat radius) {
  if (radius < 0) throw std::invalid_argument("CFExpansion: negative radius");
  if (value - radius <= 0 || value + radius >= 1)
    throw std::invalid_argument("CFExpansion: enclosure must lie inside (0,1)");
  CFExpansion cf;
  cf.has_value_ = true;
  cf.value_ = std::move(value);
  cf.radius_ = std::move(radius);
  return cf;
}

CFExpansion CFExpansion::from_decimal(const std::string& text) {
  return from_value(parse_decimal(text), BigRat(0));
}

std::vector<BigInt> CFExpansion::expand(std::size_t count, bool stop_at_end) const {
  if (count == 0) throw std::invalid_argument("coefficients: count must be >= 1");
  std::vector<BigInt> out;
  out.reserve(count);
  if (!has_value_) {
    for (std::size_t i = 0; i < count; ++i) {
      if (i < stream_.size())
        out.push_back(stream_[i]);
      else if (repeat_)
        out.push_back(stream_[i % stream_.size()]);
      else if (stop_at_end)
        break;
      else
        throw PrecisionExhausted("coefficient stream exhausted at depth " + std::to_string(i + 1));
    }
    return out;
  }

  // Interval Euclid on [lo, hi]; every step must produce one unambiguous floor.
  BigRat lo = value_ - radius_;
  BigRat hi = value_ + radius_;
  for (std::size_t i = 0; i < count; ++i) {
    if (lo <= 0) {
      if (lo == 0 && hi == 0) {
        // clean termination: the input was exactly rational
        if (stop_at_end) break;
        throw PrecisionExhausted(
            "remainder vanished: input is rational, expansion terminates at depth " +
            std::to_string(i + 1));
      }
      throw PrecisionExhausted("remainder enclosure touches 0 at depth " + std::to_string(i + 1));
    }
    // x in [lo, hi] with 0 < lo <= hi < 1, so 1/x in [1/hi, 1/lo]
    BigRat inv_lo = BigRat(1) / hi;
    BigRat inv_hi = BigRat(1) / lo;
    BigInt fl = rat_floor(inv_lo);
    if (fl != rat_floor(inv_hi))
      throw PrecisionExhausted("ambiguous coefficient at depth " + std::to_string(i + 1));
    out.push_back(fl);
    BigRat nlo = inv_lo - BigRat(fl);
    BigRat nhi = inv_hi - BigRat(fl);
    lo = nlo;
    hi = nhi;
  }
  return out;
}

std::vector<BigInt> CFExpansion::coefficients(std::size_t count) const {
  return expand(count, false);
}

std::vector<BigInt> CFExpansion::coefficients_up_to(std::size_t count) const {
  return expand(count, true);
}

std::vector<BigInt> cf_expand(const CFExpansion& cf, std::size_t count) {
  return cf.coefficients(count);
}

std::vector<Convergent> convergents_from_coeffs(const std::vector<BigInt>& a) {
  std::vector<Convergent> out;
  out.reserve(a.size());
  BigInt pm1 = 1, qm1 = 0;  // p_{-1}/q_{-1}
  BigInt p0 = 0, q0 = 1;    // p_0/q_0
  for (std::size_t i = 0; i < a.size(); ++i) {
    BigInt p = a[i] * p0 + pm1;
    BigInt q = a[i] * q0 + qm1;
    Convergent c;
    c.n = static_cast<int>(i + 1);
    c.p = p;
    c.q = q;
    c.a = a[i];
    out.push_back(std::move(c));
    pm1 = p0;
    qm1 = q0;
    p0 = p;
    q0 = q;
  }
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    out[i].omega = 1.0 / (to_double(out[i].q) * to_double(out[i + 1].q));
    out[i].has_omega = true;
  }
  return out;
}

std::vector<Convergent> convergents(const CFExpansion& cf, std::size_t count) {
  if (count == 0) throw std::invalid_argument("convergents: count must be >= 1");
  return convergents_from_coeffs(cf.coefficients(count));
}

Frac to_frac(const Convergent& c) {
  const BigInt lim = std::numeric_limits<std::int64_t>::max();
  if (c.p > lim || c.q > lim) throw std::overflow_error("convergent exceeds 64-bit range");
  return Frac(c.p.template convert_to<std::int64_t>(), c.q.template convert_to<std::int64_t>());
}

}  // namespace harperlab
