#pragma once

#include <cstddef>
#include <vector>

namespace harperlab {

// Closed interval [lo, hi]; lo == hi is a point (degenerate band).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/**
 * Finite disjoint union of closed intervals, sorted by position.
 * Construction merges any intervals that overlap or come within the merge
 * tolerance of each other; merging again is a no-op.
 */
class BandSet {
 public:
  BandSet() = default;
  explicit BandSet(std::vector<Interval> intervals, double merge_tol = 0.0);

  const std::vector<Interval>& intervals() const { return iv_; }
  double tolerance() const { return tol_; }
  std::size_t count() const { return iv_.size(); }
  bool empty() const { return iv_.empty(); }

  double measure() const;
  double min() const;
  double max() const;
  bool contains(double E, double slack = 0.0) const;

  // [lo - delta, hi + delta] per band, then re-merge.
  BandSet inflated(double delta) const;

  static BandSet merged(const BandSet& a, const BandSet& b, double tol);

 private:
  std::vector<Interval> iv_;
  double tol_ = 0.0;
};

double measure(const BandSet& bs);
double point_distance(double E, const BandSet& bs);
// Symmetric Hausdorff distance between two nonempty closed sets.
double hausdorff_distance(const BandSet& a, const BandSet& b);
// One-sided deviation sup_{x in a} dist(x, b).
double directed_deviation(const BandSet& a, const BandSet& b);

}  // namespace harperlab
