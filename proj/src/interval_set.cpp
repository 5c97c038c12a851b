#include "harperlab/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace harperlab {

BandSet::BandSet(std::vector<Interval> intervals, double merge_tol) : tol_(merge_tol) {
  if (merge_tol < 0) throw std::invalid_argument("BandSet: negative merge tolerance");
  for (const auto& iv : intervals) {
    if (!(iv.lo <= iv.hi)) throw std::invalid_argument("BandSet: interval with lo > hi");
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw std::invalid_argument("BandSet: non-finite endpoint");
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) {
              return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
            });
  for (const auto& iv : intervals) {
    if (!iv_.empty() && iv.lo <= iv_.back().hi + tol_) {
      iv_.back().hi = std::max(iv_.back().hi, iv.hi);
    } else {
      iv_.push_back(iv);
    }
  }
}

double BandSet::measure() const {
  double m = 0.0;
  for (const auto& iv : iv_) m += iv.hi - iv.lo;
  return m;
}

double BandSet::min() const {
  if (iv_.empty()) throw std::invalid_argument("BandSet::min on empty set");
  return iv_.front().lo;
}

double BandSet::max() const {
  if (iv_.empty()) throw std::invalid_argument("BandSet::max on empty set");
  return iv_.back().hi;
}

bool BandSet::contains(double E, double slack) const {
  for (const auto& iv : iv_)
    if (E >= iv.lo - slack && E <= iv.hi + slack) return true;
  return false;
}

BandSet BandSet::inflated(double delta) const {
  std::vector<Interval> out;
  out.reserve(iv_.size());
  for (const auto& iv : iv_) out.push_back({iv.lo - delta, iv.hi + delta});
  return BandSet(std::move(out), tol_);
}

BandSet BandSet::merged(const BandSet& a, const BandSet& b, double tol) {
  std::vector<Interval> all = a.intervals();
  all.insert(all.end(), b.intervals().begin(), b.intervals().end());
  return BandSet(std::move(all), tol);
}

double measure(const BandSet& bs) { return bs.measure(); }

double point_distance(double E, const BandSet& bs) {
  if (bs.empty()) throw std::invalid_argument("point_distance: empty set");
  double best = std::abs(E - bs.intervals().front().lo);
  for (const auto& iv : bs.intervals()) {
    if (E >= iv.lo && E <= iv.hi) return 0.0;
    best = std::min(best, std::min(std::abs(E - iv.lo), std::abs(E - iv.hi)));
  }
  return best;
}

double directed_deviation(const BandSet& a, const BandSet& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("directed_deviation: empty set");
  // sup over a of dist(., b) is attained at an endpoint of a or at a
  // midpoint of a gap of b that lies inside a
  double sup = 0.0;
  for (const auto& iv : a.intervals()) {
    sup = std::max(sup, point_distance(iv.lo, b));
    sup = std::max(sup, point_distance(iv.hi, b));
  }
  const auto& biv = b.intervals();
  for (std::size_t i = 0; i + 1 < biv.size(); ++i) {
    double mid = 0.5 * (biv[i].hi + biv[i + 1].lo);
    if (a.contains(mid)) sup = std::max(sup, point_distance(mid, b));
  }
  // points of a below b's min or above b's max: covered by endpoint checks
  return sup;
}

double hausdorff_distance(const BandSet& a, const BandSet& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("hausdorff_distance: empty set");
  return std::max(directed_deviation(a, b), directed_deviation(b, a));
}

}  // namespace harperlab
