#include "intervalkit/interval.hpp"

#include <algorithm>
#include <cmath>

#include "intervalkit/errors.hpp"

namespace intervalkit {

namespace {

void check_part(const Interval& p) {
  if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || p.lo > p.hi) {
    fail(ErrorCode::invalid_argument, "malformed interval component");
  }
}

}  // namespace

IntervalSet IntervalSet::normalized(std::vector<Interval> parts,
                                    Real touch_tol) {
  std::vector<Interval> kept;
  kept.reserve(parts.size());
  for (const Interval& p : parts) {
    check_part(p);
    if (p.hi > p.lo) kept.push_back(p);
  }
  auto by_lo = [](const Interval& a, const Interval& b) { return a.lo < b.lo; };
  if (!std::is_sorted(kept.begin(), kept.end(), by_lo)) {
    std::sort(kept.begin(), kept.end(), by_lo);
  }

  IntervalSet out;
  out.parts_.reserve(kept.size());
  for (const Interval& p : kept) {
    if (!out.parts_.empty() && p.lo <= out.parts_.back().hi + touch_tol) {
      out.parts_.back().hi = std::max(out.parts_.back().hi, p.hi);
    } else {
      out.parts_.push_back(p);
    }
  }
  out.recompute_measure();
  return out;
}

IntervalSet IntervalSet::from_sorted(std::vector<Interval> parts) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    check_part(parts[i]);
    if (i > 0 && parts[i].lo < parts[i - 1].hi) {
      fail(ErrorCode::invalid_argument, "interval components not disjoint");
    }
  }
  IntervalSet out;
  out.parts_ = std::move(parts);
  out.recompute_measure();
  return out;
}

void IntervalSet::recompute_measure() {
  // Neumaier summation; prop-1 style grids sum up to ~1e6 lengths and the
  // acceptance tolerances sit near the noise floor of a naive sum.
  Real sum = 0.0, comp = 0.0;
  for (const Interval& p : parts_) {
    Real x = p.hi - p.lo;
    Real t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  measure_ = sum + comp;
}

bool IntervalSet::contains(Real x, Real boundary_tol) const {
  if (parts_.empty()) return false;
  auto it = std::upper_bound(
      parts_.begin(), parts_.end(), x,
      [](Real v, const Interval& p) { return v < p.lo; });
  if (it != parts_.end() && it->lo - x <= boundary_tol) return true;
  if (it != parts_.begin()) {
    const Interval& p = *(it - 1);
    if (x - p.hi <= boundary_tol) return true;
  }
  return false;
}

Interval IntervalSet::bounding() const {
  if (parts_.empty()) return {0.0, 0.0};
  return {parts_.front().lo, parts_.back().hi};
}

}  // namespace intervalkit
