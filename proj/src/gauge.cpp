#include "harperlab/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "harperlab/errors.hpp"
#include "harperlab/model.hpp"
#include "harperlab/spectral.hpp"

namespace harperlab {

namespace {

BigInt rat_floor(const BigRat& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

BigRat frac_part(const BigRat& r) { return r - BigRat(rat_floor(r)); }

bool is_integer(const BigRat& r) {
  return boost::multiprecision::denominator(r) == 1;
}

std::string rat_str(const BigRat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace

bool PhaseExponent::equals_symbolic(const PhaseExponent& o) const {
  return is_integer(r - o.r) && s == o.s;
}

bool PhaseExponent::equals_at(const PhaseExponent& o, const Frac& alpha) const {
  BigRat a = BigRat(BigInt(alpha.p)) / BigInt(alpha.q);
  return is_integer((r - o.r) + (s - o.s) * a);
}

Generator gen_T() { return {Generator::Kind::T, BigRat(0)}; }
Generator gen_Tinv() { return {Generator::Kind::Tinv, BigRat(0)}; }
Generator gen_S(const BigRat& x) { return {Generator::Kind::S, x}; }
Generator gen_U(const BigRat& x) { return {Generator::Kind::U, x}; }
Generator gen_R() { return {Generator::Kind::R, BigRat(0)}; }

std::pair<PhaseExponent, BasisState> apply_word(const MonomialOp& op,
                                                const BasisState& start) {
  PhaseExponent ph = op.prefactor;
  BasisState st = start;
  for (auto it = op.word.rbegin(); it != op.word.rend(); ++it) {
    const Generator& g = *it;
    BigRat k_rat{st.k};
    switch (g.kind) {
      case Generator::Kind::T:
        st.k -= 1;
        break;
      case Generator::Kind::Tinv:
        st.k += 1;
        break;
      case Generator::Kind::S: {
        ph.s += g.x * k_rat;
        BigRat twice = g.x * 2;
        if (!is_integer(twice))
          throw std::invalid_argument("apply_word: S power off the half lattice");
        st.m2 += boost::multiprecision::numerator(twice);
        break;
      }
      case Generator::Kind::U: {
        ph.s += g.x * k_rat * k_rat / 2;
        BigRat twice = g.x * 2 * k_rat;
        if (!is_integer(twice))
          throw std::invalid_argument("apply_word: U shift off the half lattice");
        st.m2 += boost::multiprecision::numerator(twice);
        break;
      }
      case Generator::Kind::R: {
        if (st.m2 % 2 != 0)
          throw HalfIntegerMode("apply_word: R needs an integer mode");
        BigInt m = st.m2 / 2;
        ph.s -= BigRat(st.k) * BigRat(m);
        BigInt old_k = st.k;
        st.k = m;
        st.m2 = BigInt(-2) * old_k;
        break;
      }
    }
  }
  return {ph, st};
}

std::string AlphaSpec::label() const {
  if (symbolic) return "symbolic";
  return std::to_string(value.p) + "/" + std::to_string(value.q);
}

namespace {

MonomialOp mono(std::vector<Generator> w) {
  MonomialOp op;
  op.word = std::move(w);
  return op;
}

MonomialOp mono_ph(const BigRat& s, std::vector<Generator> w) {
  MonomialOp op;
  op.word = std::move(w);
  op.prefactor = {BigRat(0), s};
  return op;
}

std::vector<Generator> cat(std::vector<Generator> a,
                           const std::vector<Generator>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

const std::vector<NamedRelation>& relation_table() {
  static const std::vector<NamedRelation> table = [] {
    std::vector<NamedRelation> t;
    const BigRat half = BigRat(1) / 2;
    const BigRat one{1};
    const std::vector<Generator> Q = {gen_U(one), gen_R(), gen_U(half)};

    t.push_back({"R S = T^-1 R", mono({gen_R(), gen_S(one)}),
                 mono({gen_Tinv(), gen_R()})});
    t.push_back({"R S^-1 = T R", mono({gen_R(), gen_S(-one)}),
                 mono({gen_T(), gen_R()})});
    t.push_back({"R T = S R", mono({gen_R(), gen_T()}),
                 mono({gen_S(one), gen_R()})});
    t.push_back({"R T^-1 = S^-1 R", mono({gen_R(), gen_Tinv()}),
                 mono({gen_S(-one), gen_R()})});

    for (const BigRat& x : {half, one}) {
      std::string fx = (x == half) ? "1/2" : "1";
      t.push_back({"T U_" + fx + " = e[" + rat_str(x / 2) + "] S^" + fx +
                       " U_" + fx + " T",
                   mono({gen_T(), gen_U(x)}),
                   mono_ph(x / 2, {gen_S(x), gen_U(x), gen_T()})});
      t.push_back({"U_" + fx + " T = e[" + rat_str(-x / 2) + "] S^-" + fx +
                       " T U_" + fx,
                   mono({gen_U(x), gen_T()}),
                   mono_ph(-x / 2, {gen_S(-x), gen_T(), gen_U(x)})});
      t.push_back({"U_" + fx + " T^-1 = e[" + rat_str(x / 2) + "] T^-1 S^" + fx +
                       " U_" + fx,
                   mono({gen_U(x), gen_Tinv()}),
                   mono_ph(x / 2, {gen_Tinv(), gen_S(x), gen_U(x)})});
      t.push_back({"S^" + fx + " T = e[" + rat_str(-x) + "] T S^" + fx,
                   mono({gen_S(x), gen_T()}),
                   mono_ph(-x, {gen_T(), gen_S(x)})});
      t.push_back({"T^-1 S^-" + fx + " = e[" + rat_str(x) + "] S^-" + fx + " T^-1",
                   mono({gen_Tinv(), gen_S(-x)}),
                   mono_ph(x, {gen_S(-x), gen_Tinv()})});
      for (const BigRat& y : {half, one}) {
        std::string fy = (y == half) ? "1/2" : "1";
        t.push_back({"U_" + fx + " S^" + fy + " = S^" + fy + " U_" + fx,
                     mono({gen_U(x), gen_S(y)}),
                     mono({gen_S(y), gen_U(x)})});
      }
    }

    t.push_back({"Q S = e[-1/2] S T^-1 Q",
                 mono(cat(Q, {gen_S(one)})),
                 mono_ph(-half, cat({gen_S(one), gen_Tinv()}, Q))});
    t.push_back({"Q S^-1 = e[-1/2] S^-1 T Q",
                 mono(cat(Q, {gen_S(-one)})),
                 mono_ph(-half, cat({gen_S(-one), gen_T()}, Q))});
    t.push_back({"Q T^2 = e[1/2] S T Q",
                 mono(cat(Q, {gen_T(), gen_T()})),
                 mono_ph(half, cat({gen_S(one), gen_T()}, Q))});
    t.push_back({"Q T^-2 = e[1/2] S^-1 T^-1 Q",
                 mono(cat(Q, {gen_Tinv(), gen_Tinv()})),
                 mono_ph(half, cat({gen_S(-one), gen_Tinv()}, Q))});
    return t;
  }();
  return table;
}

namespace {

bool phases_equal(const PhaseExponent& a, const PhaseExponent& b,
                  const AlphaSpec& alpha) {
  return alpha.symbolic ? a.equals_symbolic(b) : a.equals_at(b, alpha.value);
}

std::string describe(const PhaseExponent& ph, const BasisState& st) {
  std::ostringstream os;
  os << "e[" << rat_str(ph.r) << "+" << rat_str(ph.s) << "a] (k=" << st.k
     << ", 2m=" << st.m2 << ")";
  return os.str();
}

}  // namespace

RelationReport verify_relation(const NamedRelation& rel,
                               std::pair<long, long> k_range,
                               std::pair<long, long> m_range,
                               const AlphaSpec& alpha) {
  RelationReport rep;
  rep.name = rel.name;
  rep.alpha = alpha.label();
  for (long k = k_range.first; k <= k_range.second; ++k) {
    for (long m = m_range.first; m <= m_range.second; ++m) {
      BasisState st{BigInt(k), BigInt(2 * m)};
      try {
        auto lhs = apply_word(rel.lhs, st);
        auto rhs = apply_word(rel.rhs, st);
        bool same = lhs.second == rhs.second &&
                    phases_equal(lhs.first, rhs.first, alpha);
        if (same) {
          ++rep.pass;
        } else {
          ++rep.fail;
          if (rep.witnesses.size() < 5) {
            std::ostringstream os;
            os << "k=" << k << " m=" << m
               << " lhs=" << describe(lhs.first, lhs.second)
               << " rhs=" << describe(rhs.first, rhs.second);
            rep.witnesses.push_back(os.str());
          }
        }
      } catch (const HalfIntegerMode&) {
        ++rep.skipped;
      }
    }
  }
  return rep;
}

RelationReport verify_conjugation(std::pair<long, long> k_range,
                                  std::pair<long, long> m_range,
                                  const AlphaSpec& alpha) {
  const BigRat half = BigRat(1) / 2;
  const BigRat one{1};
  const std::vector<Generator> Q = {gen_U(one), gen_R(), gen_U(half)};
  const std::vector<MonomialOp> lhs = {
      mono(cat(Q, {gen_T(), gen_T()})),
      mono(cat(Q, {gen_Tinv(), gen_Tinv()})),
      mono(cat(Q, {gen_S(one)})),
      mono(cat(Q, {gen_S(-one)})),
  };
  const std::vector<MonomialOp> rhs = {
      mono_ph(half, cat({gen_S(one), gen_T()}, Q)),
      mono_ph(half, cat({gen_S(-one), gen_Tinv()}, Q)),
      mono_ph(-half, cat({gen_S(one), gen_Tinv()}, Q)),
      mono_ph(-half, cat({gen_S(-one), gen_T()}, Q)),
  };

  // Canonical key for multiset comparison: phase reduced mod 1 (folding the
  // rational frequency in when one is given), then the state label.
  auto key = [&](const PhaseExponent& ph, const BasisState& st) {
    BigRat a{0}, b{0};
    if (alpha.symbolic) {
      a = frac_part(ph.r);
      b = ph.s;
    } else {
      BigRat av = BigRat(BigInt(alpha.value.p)) / BigInt(alpha.value.q);
      a = frac_part(ph.r + ph.s * av);
    }
    return std::make_tuple(a, b, st.k, st.m2);
  };

  RelationReport rep;
  rep.name = "conjugation by Q permutes {T^2, T^-2, S, S^-1}";
  rep.alpha = alpha.label();
  using Key = decltype(key(PhaseExponent{}, BasisState{}));
  for (long k = k_range.first; k <= k_range.second; ++k) {
    for (long m = m_range.first; m <= m_range.second; ++m) {
      BasisState st{BigInt(k), BigInt(2 * m)};
      std::vector<Key> left, right;
      try {
        for (const auto& op : lhs) {
          auto r = apply_word(op, st);
          left.push_back(key(r.first, r.second));
        }
        for (const auto& op : rhs) {
          auto r = apply_word(op, st);
          right.push_back(key(r.first, r.second));
        }
      } catch (const HalfIntegerMode&) {
        ++rep.skipped;
        continue;
      }
      std::sort(left.begin(), left.end());
      std::sort(right.begin(), right.end());
      if (left == right) {
        ++rep.pass;
      } else {
        ++rep.fail;
        if (rep.witnesses.size() < 5) {
          std::ostringstream os;
          os << "k=" << k << " m=" << m << ": multisets differ";
          rep.witnesses.push_back(os.str());
        }
      }
    }
  }
  return rep;
}

IsospectralReport isospectral_check(const Frac& pq, double tol) {
  IsospectralReport rep;
  rep.input = pq;
  rep.doubled = double_fraction(pq);
  rep.tol = tol;
  UnionOptions opt;
  opt.edge_tol = tol;
  // Flat band edges force the Lipschitz certificates to sample densely, so
  // give the sweep a budget proportional to the edge count.
  opt.max_evals = std::max<long>(500000, 160000L * 2 * pq.q);
  auto a = union_spectrum_report(make_amo(1.0), rep.doubled, tol, opt);
  auto c = union_spectrum_report(make_shifted_chiral(pq), pq, tol, opt);
  rep.amo_bands = a.bands;
  rep.chiral_bands = c.bands;
  rep.amo_edge_defect = a.edge_defect;
  rep.chiral_edge_defect = c.edge_defect;
  rep.distance = hausdorff_distance(a.bands, c.bands);
  rep.pass = rep.distance <= 2.0 * tol;
  return rep;
}

double ids_equality_check(const Frac& pq, const std::vector<double>& E_grid,
                          int theta_samples) {
  IDSample na = ids(make_amo(1.0), double_fraction(pq), E_grid, theta_samples, 0);
  IDSample nc = ids(make_shifted_chiral(pq), pq, E_grid, theta_samples, 0);
  double sup = 0.0;
  for (std::size_t i = 0; i < na.N.size(); ++i)
    sup = std::max(sup, std::fabs(na.N[i] - nc.N[i]));
  return sup;
}

}  // namespace harperlab
