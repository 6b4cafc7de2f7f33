#include "intervalkit/bbc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "intervalkit/preimage.hpp"
#include "intervalkit/rng.hpp"

namespace intervalkit {

namespace {

constexpr double kBoundaryTol = 1e-13;
constexpr double kValueJumpTol = 1e-12;

}  // namespace

IntervalSet n_delta(const MapSpec& map, double delta) {
  if (!(delta > 0.0)) fail(ErrorCode::invalid_argument, "delta must be > 0");

  std::vector<Interval> pieces;
  std::vector<double> splits;  // discontinuous critical locations
  for (const CriticalPoint& cp : map.critical_points()) {
    for (Side side : {Side::left, Side::right}) {
      const Branch& b = map.branch_at(cp.location, side);
      Real v = cp.value(side);
      Real ya = std::max(v - static_cast<Real>(delta), b.value_min());
      Real yb = std::min(v + static_cast<Real>(delta), b.value_max());
      if (!(ya < yb)) continue;
      Real xa = *invert_branch(b, ya);
      Real xb = *invert_branch(b, yb);
      if (xa > xb) std::swap(xa, xb);
      if (xb > xa) pieces.push_back({xa, xb});
    }
    if (std::abs(cp.value_left - cp.value_right) > kValueJumpTol) {
      splits.push_back(cp.location);
    }
  }

  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::sort(splits.begin(), splits.end());

  // Merge touching pieces, except across a discontinuity of f: the two
  // one-sided neighborhoods of such a c stay separate components.
  std::vector<Interval> merged;
  for (const Interval& p : pieces) {
    bool join = false;
    if (!merged.empty() && p.lo <= merged.back().hi + IntervalSet::kTouchTol) {
      join = true;
      for (double c : splits) {
        if (c >= merged.back().hi - IntervalSet::kTouchTol &&
            c <= p.lo + IntervalSet::kTouchTol) {
          join = false;
          break;
        }
      }
    }
    if (join) {
      merged.back().hi = std::max(merged.back().hi, p.hi);
    } else {
      merged.push_back(p);
    }
  }
  return IntervalSet::from_sorted(std::move(merged));
}

FirstEntryStats first_entry_stats(const MapSpec& map, double delta,
                                  int samples, int horizon,
                                  std::uint64_t seed) {
  if (samples < 1000) fail(ErrorCode::invalid_argument, "need samples >= 1000");
  if (horizon < 100) fail(ErrorCode::invalid_argument, "need horizon >= 100");

  IntervalSet nd = n_delta(map, delta);
  std::mt19937_64 gen(seed);

  FirstEntryStats stats;
  stats.delta = delta;
  stats.min_first_entry_deriv = std::numeric_limits<double>::infinity();

  for (int s = 0; s < samples; ++s) {
    double x0 = uniform01(gen);
    double x = x0;
    double log_deriv = 0.0;
    int entry = -1;
    for (int n = 0; n <= horizon; ++n) {
      if (nd.contains(x, kBoundaryTol)) {
        entry = n;
        break;
      }
      if (n == horizon) break;
      // x is outside N_delta here, hence away from the critical set: every
      // one-sided neighborhood of C belongs to N_delta.
      log_deriv += std::log(std::abs(map.deriv(x, 1)));
      x = map.eval(x);
    }
    if (entry < 0) {
      ++stats.never_entered;
      continue;
    }
    ++stats.samples_used;
    double deriv = std::exp(log_deriv);  // entry at n = 0 gives exactly 1
    if (deriv < stats.min_first_entry_deriv) {
      stats.min_first_entry_deriv = deriv;
      stats.argmin_x = x0;
      stats.entry_time = entry;
    }
  }
  if (stats.samples_used == 0) stats.min_first_entry_deriv = 0.0;
  return stats;
}

const char* verdict_name(BBCReport::Verdict v) {
  switch (v) {
    case BBCReport::Verdict::bounded: return "bounded";
    case BBCReport::Verdict::degrading: return "degrading";
    case BBCReport::Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

BBCReport bbc_scan(const MapSpec& map, const std::vector<double>& delta_grid,
                   int samples, int horizon, std::uint64_t seed) {
  if (delta_grid.size() < 3) {
    fail(ErrorCode::invalid_argument, "delta grid needs >= 3 values");
  }
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] > 0.0)) {
      fail(ErrorCode::invalid_argument, "deltas must be positive");
    }
    if (i > 0 && !(delta_grid[i] < delta_grid[i - 1])) {
      fail(ErrorCode::invalid_argument, "delta grid must be decreasing");
    }
  }

  BBCReport report;
  report.delta_grid = delta_grid;
  report.samples = samples;
  report.horizon = horizon;
  report.seed = seed;
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    report.per_delta.push_back(first_entry_stats(
        map, delta_grid[i], samples, horizon, derive_seed(seed, i)));
  }

  const auto& pd = report.per_delta;
  std::size_t n = pd.size();
  bool all_used = true;
  for (const auto& st : pd) all_used &= st.samples_used > 0;

  report.verdict = BBCReport::Verdict::inconclusive;
  if (all_used) {
    double a = pd[n - 2].min_first_entry_deriv;
    double b = pd[n - 1].min_first_entry_deriv;
    if (std::max(a, b) <= 2.0 * std::min(a, b)) {
      report.verdict = BBCReport::Verdict::bounded;
    } else {
      bool degrading = true;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        double hi = pd[i].min_first_entry_deriv;
        double lo = pd[i + 1].min_first_entry_deriv;
        double decades = std::log10(delta_grid[i] / delta_grid[i + 1]);
        if (!(lo < hi) ||
            !(std::pow(hi / lo, 1.0 / decades) > 2.0)) {
          degrading = false;
          break;
        }
      }
      if (degrading) report.verdict = BBCReport::Verdict::degrading;
    }
  }
  return report;
}

}  // namespace intervalkit
