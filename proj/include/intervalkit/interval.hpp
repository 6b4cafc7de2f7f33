#pragma once

#include <cstddef>
#include <vector>

namespace intervalkit {

// Extended precision for map evaluation and interval endpoints. Preimage
// grids accumulate ~1e6 component lengths whose double-rounding errors are
// coherent (the affine families translate by exact dyadics, so every
// component rounds the same way); 80-bit arithmetic keeps the summed bias
// well under the measure tolerances.
using Real = long double;

struct Interval {
  Real lo = 0.0;
  Real hi = 0.0;

  Real length() const { return hi - lo; }
  bool contains(Real x) const { return x >= lo && x <= hi; }
};

/// A finite union of disjoint intervals in [0,1], sorted by left endpoint.
/// This is the result type of every preimage computation; the measure is the
/// sum of component lengths, accumulated with compensated summation.
class IntervalSet {
 public:
  static constexpr Real kTouchTol = 1e-13;

  IntervalSet() = default;

  // Sorts, drops empty parts, merges parts that overlap or touch within
  // `touch_tol`. Components shorter than that are kept, not dropped.
  static IntervalSet normalized(std::vector<Interval> parts,
                                Real touch_tol = kTouchTol);

  // Trusts the caller to pass sorted, pairwise-disjoint parts.
  static IntervalSet from_sorted(std::vector<Interval> parts);

  const std::vector<Interval>& parts() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  Real measure() const { return measure_; }

  // Membership with a symmetric boundary tolerance; points within
  // `boundary_tol` of a component count as inside.
  bool contains(Real x, Real boundary_tol = 0.0) const;

  // Smallest interval covering the whole set; {0,0} when empty.
  Interval bounding() const;

 private:
  void recompute_measure();

  std::vector<Interval> parts_;
  Real measure_ = 0.0;
};

}  // namespace intervalkit
