#include "harperlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <sstream>

#include "harperlab/cache.hpp"
#include "harperlab/errors.hpp"
#include "harperlab/parallel.hpp"

namespace harperlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Period coefficients evaluated without copying the family; phases are
// theta + (n p mod q)/q so n-periodicity is exact.
struct PeriodEval {
  const CoefficientFamily* fam;
  std::int64_t q;
  std::vector<double> resid;  // resid[n] = ((n p) mod q)/q

  PeriodEval(const CoefficientFamily& f, const Frac& alpha) : fam(&f), q(alpha.q) {
    resid.resize(q);
    std::int64_t p = ((alpha.p % q) + q) % q;
    std::int64_t r = 0;
    for (std::int64_t n = 0; n < q; ++n) {
      resid[n] = static_cast<double>(r) / static_cast<double>(q);
      r += p;
      if (r >= q) r -= q;
    }
  }

  PeriodCoeffs at(double theta) const {
    PeriodCoeffs pc;
    pc.v.resize(q);
    pc.b.resize(q);
    for (std::int64_t n = 0; n < q; ++n) {
      double ph = theta + resid[n];
      pc.v[n] = fam->v.eval(ph);
      pc.b[n] = fam->b.eval(ph);
    }
    return pc;
  }
};

std::vector<double> sym_tridiag_eigs(const std::vector<double>& d,
                                     const std::vector<double>& off) {
  const int n = static_cast<int>(d.size());
  if (n == 1) return {d[0]};
  Eigen::VectorXd dv = Eigen::Map<const Eigen::VectorXd>(d.data(), n);
  Eigen::VectorXd ov = Eigen::Map<const Eigen::VectorXd>(off.data(), n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(dv, ov, Eigen::EigenvaluesOnly);
  return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + n);
}

// Eigenvalues of the k = 0 / k = pi Floquet matrices built from raw
// period coefficients.
std::vector<double> corner_eigs(const PeriodCoeffs& pc, int corner_sign) {
  const int q = static_cast<int>(pc.v.size());
  if (q == 1) return {pc.v[0] + 2.0 * corner_sign * pc.b[0]};
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(q, q);
  for (int n = 0; n < q; ++n) m(n, n) = pc.v[n];
  for (int n = 0; n < q; ++n) {
    int j = (n + 1) % q;
    double amp = pc.b[n] * (n == q - 1 ? corner_sign : 1);
    m(j, n) += amp;
    m(n, j) += amp;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + q);
}

// Sorted 2q-multiset eig(k=0) U eig(k=pi).
std::vector<double> edge_multiset(const PeriodCoeffs& pc) {
  std::vector<double> a = corner_eigs(pc, +1);
  std::vector<double> b = corner_eigs(pc, -1);
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool has_singular_bond(const PeriodCoeffs& pc) {
  for (double b : pc.b)
    if (std::abs(b) <= kSingularThreshold) return true;
  return false;
}

// Point spectrum of a fiber whose cycle decouples at zero bonds: the union
// of the open-chain block eigenvalues, independent of k.
std::vector<double> decoupled_eigs(const PeriodCoeffs& pc) {
  const int q = static_cast<int>(pc.v.size());
  std::vector<int> zero_bonds;
  for (int n = 0; n < q; ++n)
    if (std::abs(pc.b[n]) <= kSingularThreshold) zero_bonds.push_back(n);
  std::vector<double> out;
  out.reserve(q);
  // chain after bond z runs from site z+1 up to the next zero bond
  for (std::size_t zi = 0; zi < zero_bonds.size(); ++zi) {
    int start = (zero_bonds[zi] + 1) % q;
    int next_zero = zero_bonds[(zi + 1) % zero_bonds.size()];
    int len = (next_zero - start + q) % q + 1;
    std::vector<double> d(len), off;
    off.reserve(len - 1);
    for (int i = 0; i < len; ++i) d[i] = pc.v[(start + i) % q];
    for (int i = 0; i + 1 < len; ++i) off.push_back(pc.b[(start + i) % q]);
    std::vector<double> eigs = sym_tridiag_eigs(d, off);
    out.insert(out.end(), eigs.begin(), eigs.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

BandSet pair_into_bands(const std::vector<double>& edges, double merge_slack = 0.0) {
  std::vector<Interval> iv;
  iv.reserve(edges.size() / 2);
  for (std::size_t i = 0; i + 1 < edges.size(); i += 2)
    iv.push_back({edges[i], edges[i + 1]});
  return BandSet(std::move(iv), merge_slack);
}

}  // namespace

double discriminant_from_coeffs(const PeriodCoeffs& pc, double E) {
  const int q = static_cast<int>(pc.v.size());
  double m00 = 1, m01 = 0, m10 = 0, m11 = 1;
  double logscale = 0.0;
  for (int n = 0; n < q; ++n) {
    double bn = pc.b[n];
    if (std::abs(bn) <= kSingularThreshold)
      throw SingularPhase("discriminant: |b_n(theta)| below singular threshold at n=" +
                          std::to_string(n));
    double bprev = pc.b[(n + q - 1) % q];
    double a00 = (E - pc.v[n]) / bn;
    double a01 = -bprev / bn;
    // A = [[a00, a01], [1, 0]]
    double n00 = a00 * m00 + a01 * m10;
    double n01 = a00 * m01 + a01 * m11;
    m10 = m00;
    m11 = m01;
    m00 = n00;
    m01 = n01;
    double norm = std::max(std::max(std::abs(m00), std::abs(m01)),
                           std::max(std::abs(m10), std::abs(m11)));
    if (norm > 1e100 || (norm > 0 && norm < 1e-100)) {
      m00 /= norm;
      m01 /= norm;
      m10 /= norm;
      m11 /= norm;
      logscale += std::log(norm);
    }
  }
  return (m00 + m11) * std::exp(logscale);
}

double discriminant(const CoefficientFamily& fam, const Frac& alpha, double theta, double E) {
  PeriodEval pe(fam, alpha);
  double t = theta - std::floor(theta);
  return discriminant_from_coeffs(pe.at(t), E);
}

BandSet fiber_spectrum(const CoefficientFamily& fam, const Frac& alpha, double theta) {
  PeriodEval pe(fam, alpha);
  double t = theta - std::floor(theta);
  PeriodCoeffs pc = pe.at(t);
  if (has_singular_bond(pc)) {
    std::vector<Interval> pts;
    for (double x : decoupled_eigs(pc)) pts.push_back({x, x});
    return BandSet(std::move(pts), 0.0);
  }
  return pair_into_bands(edge_multiset(pc));
}

namespace {

// ---- certified union sweep over theta -------------------------------------

struct ShubertOut {
  double best = 0.0;    // best value found (a true function value)
  double bound = 0.0;   // certified one-sided bound (>= max, or <= min after negation)
  long evals = 0;
  bool converged = false;
};

// Maximizes an L-Lipschitz function on the span of the seed points using
// Shubert cones. f(theta, lo_hint, hi_hint) must return the exact value;
// the hints bracket it. Certified: bound >= true max always.
template <class F>
ShubertOut shubert_max(F&& f, double L, double eps, long budget,
                       const std::vector<std::pair<double, double>>& pts,
                       std::vector<std::pair<double, double>>* record = nullptr) {
  struct Seg {
    double ub, t0, t1, f0, f1;
  };
  auto cmp = [](const Seg& a, const Seg& b) { return a.ub < b.ub; };
  std::priority_queue<Seg, std::vector<Seg>, decltype(cmp)> pq(cmp);
  auto seg_ub = [&](double t0, double t1, double f0, double f1) {
    return 0.5 * (f0 + f1) + 0.5 * L * (t1 - t0);
  };
  ShubertOut out;
  out.best = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) out.best = std::max(out.best, p.second);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    pq.push({seg_ub(pts[i].first, pts[i + 1].first, pts[i].second, pts[i + 1].second),
             pts[i].first, pts[i + 1].first, pts[i].second, pts[i + 1].second});
  double residual = out.best;
  while (!pq.empty()) {
    Seg s = pq.top();
    if (s.ub <= out.best + eps) {
      out.bound = std::max(out.best, s.ub);
      out.converged = true;
      return out;
    }
    if (out.evals >= budget) {
      out.bound = std::max({out.best, s.ub, residual});
      return out;
    }
    pq.pop();
    double w = s.t1 - s.t0;
    if (w < 4e-16) {
      residual = std::max(residual, s.ub);
      continue;
    }
    double apex = 0.5 * (s.t0 + s.t1) + (s.f1 - s.f0) / (2.0 * L);
    apex = std::min(std::max(apex, s.t0 + 0.1 * w), s.t1 - 0.1 * w);
    double blo = std::min(s.f0, s.f1) - L * w;
    double bhi = std::max(s.f0, s.f1) + L * w;
    double v = f(apex, blo, bhi);
    ++out.evals;
    if (record) record->push_back({apex, v});
    out.best = std::max(out.best, v);
    pq.push({seg_ub(s.t0, apex, s.f0, v), s.t0, apex, s.f0, v});
    pq.push({seg_ub(apex, s.t1, v, s.f1), apex, s.t1, v, s.f1});
  }
  out.bound = std::max(out.best, residual);
  out.converged = residual <= out.best + eps;
  return out;
}

UnionReport generic_union(const CoefficientFamily& fam, const Frac& alpha, double tol,
                          const UnionOptions& opt) {
  const int q = static_cast<int>(alpha.q);
  const double R = 1.0 / q;  // fiber spectra are 1/q-periodic in theta
  const double L = fam.motion_bound();
  UnionReport rep;

  PeriodEval pe(fam, alpha);
  if (L == 0.0) {
    // constant coefficients: every fiber is the same
    rep.bands = pair_into_bands(edge_multiset(pe.at(0.0)));
    rep.bands_inner = rep.bands;
    return rep;
  }

  // Seed density only affects efficiency: correctness of the final bounds
  // comes from the Lipschitz cones, so cap the dense eigensolves at large q.
  const int M0 = opt.base_grid > 0 ? opt.base_grid : std::min(2 * q + 1, 96);
  std::vector<double> thetas(M0 + 1);
  std::vector<std::vector<double>> base(M0 + 1);
  for (int i = 0; i <= M0; ++i) {
    thetas[i] = R * i / M0;
    base[i] = edge_multiset(pe.at(thetas[i]));
  }

  const double eps = opt.edge_tol > 0 ? opt.edge_tol : tol / (4.0 * q);
  const long rank_budget = opt.max_evals / (2 * q) + 1;
  const double xtol = eps / 8.0;

  // exact rank evaluation: Sturm counts on both corner signs, bisected
  auto eval_rank = [&](int rank, double theta, double blo, double bhi) -> double {
    PeriodCoeffs pc = pe.at(theta);
    if (q >= 3) {
      std::vector<double> off(pc.b.begin(), pc.b.end() - 1);
      double c = pc.b.back();
      double pad = 1e-9 * (1.0 + std::abs(blo) + std::abs(bhi));
      for (int attempt = 0; attempt < 5; ++attempt) {
        try {
          return union_rank_bisect(pc.v, off, c, rank, blo - pad, bhi + pad, xtol);
        } catch (const std::invalid_argument&) {
          pad = (pad + (bhi - blo) + 1e-9) * 2.0;
        }
      }
      // stale hints: the Gershgorin disk certainly brackets every rank
      double g = gershgorin_bound(pc) + 1.0;
      try {
        return union_rank_bisect(pc.v, off, c, rank, -g, g, xtol);
      } catch (const std::invalid_argument&) {
        // fall through to the dense solve
      }
    }
    return edge_multiset(pc)[rank];
  };

  // Signed-max convention: odd ranks maximize the edge function, even ranks
  // maximize its negation. best_s never decreases and bound_s never
  // increases across passes, so both stay certified after a resume.
  std::vector<double> best_s(2 * q, -std::numeric_limits<double>::infinity());
  std::vector<double> bound_s(2 * q, std::numeric_limits<double>::infinity());
  std::vector<std::vector<std::pair<double, double>>> hist(2 * q);
  long total_evals = 0;

  auto run_rank = [&](int rank, double eps_run, long budget_run) {
    const bool maximize = (rank % 2 == 1);
    std::vector<std::pair<double, double>> seed;
    seed.reserve(M0 + 1 + hist[rank].size());
    for (int i = 0; i <= M0; ++i)
      seed.push_back({thetas[i], maximize ? base[i][rank] : -base[i][rank]});
    for (const auto& p : hist[rank]) seed.push_back(p);
    std::sort(seed.begin(), seed.end());
    seed.erase(std::unique(seed.begin(), seed.end(),
                           [](const auto& a, const auto& b) { return a.first == b.first; }),
               seed.end());
    auto f = [&](double th, double blo, double bhi) {
      double v = eval_rank(rank, th, maximize ? blo : -bhi, maximize ? bhi : -blo);
      return maximize ? v : -v;
    };
    ShubertOut so = shubert_max(f, L, eps_run, budget_run, seed, &hist[rank]);
    total_evals += so.evals;
    best_s[rank] = std::max(best_s[rank], so.best);
    bound_s[rank] = std::min(bound_s[rank], so.bound);
  };

  // Uncertainty that matters for the union is the strip between a rank's best
  // achieved value and its certified bound, minus what other bands already
  // cover from the inside. Where two bands share a contact level the strip is
  // interior spectrum, so it counts for nothing no matter how loose the cone
  // bound is; this is what keeps theta-independent contact levels (chiral
  // couplings at even denominators produce them) from demanding an
  // exhaustive-cover certificate.
  auto eff_gaps = [&]() {
    std::vector<std::pair<double, double>> inner(q);
    for (int j = 0; j < q; ++j) inner[j] = {-best_s[2 * j], best_s[2 * j + 1]};
    std::sort(inner.begin(), inner.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& ivn : inner) {
      if (!merged.empty() && ivn.first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, ivn.second);
      else
        merged.push_back(ivn);
    }
    auto uncovered = [&](double a, double b) {
      if (!(b > a)) return 0.0;
      double cov = 0.0;
      for (const auto& m : merged)
        cov += std::max(0.0, std::min(b, m.second) - std::max(a, m.first));
      return (b - a) - cov;
    };
    std::vector<double> g(2 * q);
    for (int j = 0; j < q; ++j) {
      g[2 * j] = uncovered(-bound_s[2 * j], -best_s[2 * j]);
      g[2 * j + 1] = uncovered(best_s[2 * j + 1], bound_s[2 * j + 1]);
    }
    return g;
  };

  // Coarse pass over every rank, then spend the rest of the budget only where
  // the union still has uncovered uncertainty.
  const double eps_coarse =
      std::max(eps, 1e-3 * (1.0 + gershgorin_bound(pe.at(0.0))));
  const long budget_coarse = std::min(
      rank_budget, static_cast<long>(R * L / eps_coarse) + 8L * (M0 + 1) + 64);
  for (int rank = 0; rank < 2 * q; ++rank)
    run_rank(rank, eps_coarse, budget_coarse);

  // Bounded rounds so budget left over by ranks that converge early can move
  // to ranks that needed more than their initial share.
  std::vector<double> gaps = eff_gaps();
  for (int round = 0; round < 4; ++round) {
    std::vector<int> needy;
    for (int rank = 0; rank < 2 * q; ++rank)
      if (gaps[rank] > eps) needy.push_back(rank);
    long left = opt.max_evals - total_evals;
    if (needy.empty() || left <= 0) break;
    long budget_rank = left / static_cast<long>(needy.size()) + 1;
    for (int rank : needy) run_rank(rank, eps, budget_rank);
    gaps = eff_gaps();
  }

  std::vector<Interval> iv(q), iv_in(q);
  for (int j = 0; j < q; ++j) {
    iv[j] = {-bound_s[2 * j], bound_s[2 * j + 1]};
    iv_in[j] = {-best_s[2 * j], best_s[2 * j + 1]};
  }
  rep.bands = BandSet(std::move(iv), 0.0);
  rep.bands_inner = BandSet(std::move(iv_in), 0.0);
  rep.measure_defect = std::accumulate(gaps.begin(), gaps.end(), 0.0);
  rep.edge_defect = *std::max_element(gaps.begin(), gaps.end());
  rep.evals = total_evals;
  // Explicit edge_tol asks for per-edge certificates; otherwise certify the
  // total measure defect against tol.
  rep.certified =
      (opt.edge_tol > 0) ? rep.edge_defect <= eps : rep.measure_defect <= tol;
  if (!rep.certified && !opt.best_effort) {
    std::ostringstream ss;
    if (opt.edge_tol > 0)
      ss << "union sweep: some edge not localized to " << opt.edge_tol
         << " (worst gap " << rep.edge_defect << ")";
    else
      ss << "union sweep: defect " << rep.measure_defect << " > tol " << tol;
    ss << " after " << total_evals << " refinement evaluations";
    throw BudgetExceeded(ss.str());
  }
  return rep;
}

// Chambers-type fast path: Delta(E, theta) + 2 s lambda^q cos(2 pi q theta)
// does not depend on theta; the union over theta is the preimage
// {|F| <= 2 + 2 lambda^q}, whose boundary is reached at the extremal
// phases. Cross-checked against the generic sweep in tests.
UnionReport amo_union(const CoefficientFamily& fam, const Frac& alpha) {
  const int q = static_cast<int>(alpha.q);
  PeriodEval pe(fam, alpha);
  const double lam_q = std::pow(fam.lambda, q);

  double theta_hi = 0.0, theta_lo = 1.0 / (2.0 * q);
  double degenerate_slack = 0.0;
  std::vector<double> e0 = corner_eigs(pe.at(0.0), +1);
  double scale = 1.0 + std::max(std::abs(e0.front()), std::abs(e0.back()));
  if (2.0 * lam_q > 1e-12 * scale) {
    // sign of the cos(2 pi q theta) coefficient, probed at a k=0 eigenvalue
    // of the theta=0 fiber where F is O(1): Delta(x, 1/(4q)) - 2 = 2 s lam^q
    double x = e0.back();
    double probe = discriminant_from_coeffs(pe.at(1.0 / (4.0 * q)), x) - 2.0;
    if (probe < 0) {
      theta_hi = 1.0 / (2.0 * q);
      theta_lo = 0.0;
    }
  } else {
    // theta dependence below floating noise; any phase pair works
    theta_lo = theta_hi = 0.0;
    degenerate_slack = 2.0 * lam_q;
  }

  std::vector<double> upper = corner_eigs(pe.at(theta_hi), +1);  // F = +(2+2 lam^q)
  std::vector<double> lower = corner_eigs(pe.at(theta_lo), -1);  // F = -(2+2 lam^q)
  std::vector<double> edges;
  edges.reserve(2 * q);
  std::merge(upper.begin(), upper.end(), lower.begin(), lower.end(),
             std::back_inserter(edges));
  UnionReport rep;
  rep.edge_defect = 1e-12 * scale + degenerate_slack;
  // Bands separated by less than the certified edge accuracy are touching
  // at this resolution (q = 2 at critical coupling meets at E = 0 exactly).
  rep.bands = pair_into_bands(edges, rep.edge_defect);
  rep.bands_inner = rep.bands;
  rep.fast_path = true;
  rep.measure_defect = 2.0 * q * rep.edge_defect;
  rep.certified = true;
  return rep;
}

}  // namespace

UnionReport union_spectrum_report(const CoefficientFamily& fam, const Frac& alpha,
                                  double tol, const UnionOptions& opt) {
  if (!(tol > 0)) throw std::invalid_argument("union_spectrum: tol must be > 0");
  if (fam.kind == FamilyKind::Amo) {
    UnionReport rep = amo_union(fam, alpha);
    if (rep.measure_defect > tol) {
      // caller wants tighter than floating accuracy; fall back honestly
      rep.certified = false;
      if (!opt.best_effort)
        throw BudgetExceeded("union_spectrum: tol below attainable floating accuracy");
    }
    return rep;
  }
  return generic_union(fam, alpha, tol, opt);
}

BandSet union_spectrum(const CoefficientFamily& fam, const Frac& alpha, double tol) {
  return union_spectrum_report(fam, alpha, tol, UnionOptions{}).bands;
}

IDSample ids(const CoefficientFamily& fam, const Frac& alpha,
             const std::vector<double>& E_grid, int theta_samples, int k_samples) {
  if (!std::is_sorted(E_grid.begin(), E_grid.end()))
    throw std::invalid_argument("ids: energy grid must be sorted");
  const int q = static_cast<int>(alpha.q);
  const int M = theta_samples > 0 ? theta_samples : 256;
  PeriodEval pe(fam, alpha);
  std::vector<double> acc(E_grid.size(), 0.0);

  for (int t = 0; t < M; ++t) {
    const double theta = (t + 0.5) / M;
    PeriodCoeffs pc = pe.at(theta);
    if (k_samples > 0) {
      SampledOperator op = make_op(fam, alpha, theta);
      for (int s = 0; s < k_samples; ++s) {
        double k = kTwoPi * (s + 0.5) / k_samples;
        std::vector<double> eigs = floquet_eigs(op, k);
        for (std::size_t g = 0; g < E_grid.size(); ++g) {
          auto it = std::upper_bound(eigs.begin(), eigs.end(), E_grid[g]);
          acc[g] += static_cast<double>(it - eigs.begin()) / q;
        }
      }
      continue;
    }
    if (has_singular_bond(pc)) {
      std::vector<double> pts = decoupled_eigs(pc);
      for (std::size_t g = 0; g < E_grid.size(); ++g) {
        auto it = std::upper_bound(pts.begin(), pts.end(), E_grid[g]);
        acc[g] += static_cast<double>(it - pts.begin()) / q;
      }
      continue;
    }
    // exact Bloch integration: inside band j the fraction of momenta with
    // eigenvalue <= E is arccos(Delta/2)/pi, oriented by the sign of
    // Delta' across the band
    std::vector<double> edges = edge_multiset(pc);
    const int nb = q;
    std::vector<double> los(nb), his(nb);
    std::vector<int> k0_first(nb, 1);
    for (int j = 0; j < nb; ++j) {
      los[j] = edges[2 * j];
      his[j] = edges[2 * j + 1];
      double w = his[j] - los[j];
      if (w > 1e-13) {
        double d1 = discriminant_from_coeffs(pc, los[j] + 0.3 * w);
        double d2 = discriminant_from_coeffs(pc, los[j] + 0.7 * w);
        k0_first[j] = d1 > d2 ? 1 : 0;
      }
    }
    for (std::size_t g = 0; g < E_grid.size(); ++g) {
      double E = E_grid[g];
      double count = 0.0;
      for (int j = 0; j < nb; ++j) {
        if (E >= his[j]) {
          count += 1.0;
        } else if (E > los[j]) {
          double w = his[j] - los[j];
          if (w <= 1e-13) {
            count += 1.0;
          } else {
            double c = std::clamp(discriminant_from_coeffs(pc, E) / 2.0, -1.0, 1.0);
            double frac = std::acos(c) / std::numbers::pi;
            count += k0_first[j] ? frac : 1.0 - frac;
          }
        }
      }
      acc[g] += count / q;
    }
  }

  IDSample out;
  out.grid = E_grid;
  out.N.resize(E_grid.size());
  double denom = static_cast<double>(M) * (k_samples > 0 ? k_samples : 1);
  double prev = 0.0;
  for (std::size_t g = 0; g < E_grid.size(); ++g) {
    double v = std::clamp(acc[g] / denom, 0.0, 1.0);
    v = std::max(v, prev);  // guard monotonicity against rounding
    out.N[g] = v;
    prev = v;
  }
  return out;
}

std::vector<ButterflyEntry> butterfly(const CoefficientFamily& fam, int q_max,
                                      double tol, Cache* cache, int workers) {
  if (q_max < 2) throw std::invalid_argument("butterfly: q_max must be >= 2");
  std::vector<Frac> fracs;
  for (int q = 2; q <= q_max; ++q)
    for (int p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) fracs.push_back(Frac(p, q));
  std::sort(fracs.begin(), fracs.end());

  std::vector<ButterflyEntry> out(fracs.size());
  parallel_for(fracs.size(), workers, [&](std::size_t i) {
    ButterflyEntry e;
    e.frac = fracs[i];
    if (cache) {
      auto hit = cache->get(CacheKey{family_token(fam), fam.lambda, fracs[i].p,
                                     fracs[i].q, tol});
      if (hit) {
        e.bands = *hit;
        out[i] = std::move(e);
        return;
      }
    }
    UnionOptions opt;
    opt.best_effort = true;
    UnionReport rep = union_spectrum_report(fam, fracs[i], tol, opt);
    e.bands = rep.bands;
    e.budget_exceeded = !rep.certified;
    if (cache && rep.certified)
      cache->put(CacheKey{family_token(fam), fam.lambda, fracs[i].p, fracs[i].q, tol},
                 e.bands);
    out[i] = std::move(e);
  });
  return out;
}

GapReport halfline_gap_count(const CoefficientFamily& fam, const Frac& alpha,
                             double theta, int N_trunc, double edge_buffer) {
  const int q = static_cast<int>(alpha.q);
  if (N_trunc < 10 * q)
    throw std::invalid_argument("halfline_gap_count: N_trunc must be >= 10q");
  PeriodEval pe(fam, alpha);
  double t = theta - std::floor(theta);
  PeriodCoeffs pc = pe.at(t);
  if (has_singular_bond(pc))
    throw SingularPhase("halfline_gap_count: phase has a vanishing bond");

  GapReport rep;
  rep.bands = pair_into_bands(edge_multiset(pc));
  const auto& bands = rep.bands.intervals();
  if (bands.size() <= 1) return rep;  // no interior gaps

  SampledOperator op = make_op(fam, alpha, t);
  auto section_eigs = [&](int N) {
    std::vector<double> d(N), off(N - 1);
    for (int n = 0; n < N; ++n) d[n] = op.v_n(n);
    for (int n = 0; n + 1 < N; ++n) off[n] = op.b_n(n);
    return sym_tridiag_eigs(d, off);
  };
  // two sizes: the left boundary phase is fixed, the right boundary phase
  // moves by alpha, so only genuine edge states persist
  std::vector<double> s1 = section_eigs(N_trunc);
  std::vector<double> s2 = section_eigs(N_trunc + q + 1);

  const double match_tol = 1e-6;
  for (std::size_t g = 0; g + 1 < bands.size(); ++g) {
    GapReport::Gap gap;
    gap.span = {bands[g].hi, bands[g + 1].lo};
    auto in_gap = [&](double x) {
      return x > gap.span.lo + edge_buffer && x < gap.span.hi - edge_buffer;
    };
    std::vector<double> first;
    for (double x : s1)
      if (in_gap(x)) first.push_back(x);
    for (double x : first) {
      bool persists = false;
      for (double y : s2)
        if (std::abs(x - y) <= match_tol && in_gap(y)) {
          persists = true;
          break;
        }
      if (!persists) continue;
      // cluster within 1e-8 counts once
      if (!gap.energies.empty() && std::abs(gap.energies.back() - x) <= 1e-8) continue;
      gap.energies.push_back(x);
    }
    gap.count = static_cast<int>(gap.energies.size());
    gap.inconclusive = gap.count > 2;
    rep.inconclusive = rep.inconclusive || gap.inconclusive;
    rep.gaps.push_back(std::move(gap));
  }
  return rep;
}

}  // namespace harperlab
