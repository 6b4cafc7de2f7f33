#include "intervalkit/preimage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "intervalkit/rng.hpp"

namespace intervalkit {

namespace {

constexpr double kInvertResidualTol = 1e-12;
constexpr int kInvertMaxIters = 200;

void check_target(const IntervalSet& target) {
  if (target.empty()) return;
  Interval b = target.bounding();
  if (b.lo < 0.0 || b.hi > 1.0) {
    fail(ErrorCode::out_of_domain, "preimage target leaves [0,1]");
  }
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                 double* intercept) {
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (intercept) *intercept = (sy - slope * sx) / n;
  return slope;
}

}  // namespace

std::optional<Real> invert_branch(const Branch& branch, Real y) {
  if (!(y >= branch.value_min() && y <= branch.value_max())) {
    return std::nullopt;
  }
  Real a = branch.domain.lo;
  Real b = branch.domain.hi;
  const Real s = branch.orientation == Orientation::increasing ? 1.0 : -1.0;

  // Evaluation noise can push f past y at the very ends; clamp there.
  if (s * (branch.f(a) - y) >= 0.0) return a;
  if (s * (branch.f(b) - y) <= 0.0) return b;

  Real x = 0.5L * (a + b);
  Real best_x = x;
  Real best_r = std::numeric_limits<Real>::infinity();
  int stall = 0;
  for (int iter = 0; iter < kInvertMaxIters; ++iter) {
    Real fx = branch.f(x);
    Real g = s * (fx - y);
    Real r = std::abs(g);
    if (r < best_r) {
      best_r = r;
      best_x = x;
      stall = 0;
    } else if (++stall >= 3 && best_r < kInvertResidualTol) {
      break;  // residual at the evaluation noise floor
    }
    if (r == 0.0) break;
    if (g > 0.0) {
      b = x;
    } else {
      a = x;
    }
    Real width = b - a;
    if (width <= 4.0L * std::numeric_limits<Real>::epsilon() *
                     std::max(std::abs(a), std::abs(b)) ||
        width <= 1e-300L) {
      break;
    }
    Real d = branch.df1(x);
    Real xn = std::abs(d) > 1e-8 ? x - (fx - y) / d : 0.5L * (a + b);
    if (!(xn > a && xn < b)) xn = 0.5L * (a + b);
    x = xn;
  }
  if (!(best_r < kInvertResidualTol)) {
    fail(ErrorCode::no_convergence,
         "branch inversion stalled (residual " +
             std::to_string(static_cast<double>(best_r)) +
             "); branch is likely not monotone");
  }
  return best_x;
}

IntervalSet one_step_preimage(const MapSpec& map, const IntervalSet& target) {
  // Branch domains ascend and each branch's children inherit the target
  // order (up to a flip on decreasing branches), so the collected components
  // arrive already sorted and normalized() skips its sort.
  std::vector<Interval> comps;
  comps.reserve(target.size() * map.branches().size());
  for (const Branch& branch : map.branches()) {
    std::size_t first = comps.size();
    const Real vmin = branch.value_min();
    const Real vmax = branch.value_max();
    for (const Interval& t : target.parts()) {
      Real ya = std::max(t.lo, vmin);
      Real yb = std::min(t.hi, vmax);
      if (!(ya < yb)) continue;
      Real xa = *invert_branch(branch, ya);
      Real xb = *invert_branch(branch, yb);
      if (xa > xb) std::swap(xa, xb);
      if (xb > xa) comps.push_back({xa, xb});
    }
    if (branch.orientation == Orientation::decreasing) {
      std::reverse(comps.begin() + first, comps.end());
    }
  }
  return IntervalSet::normalized(std::move(comps));
}

IntervalSet preimage_set(const MapSpec& map, const IntervalSet& target,
                         int steps) {
  if (steps < 0) fail(ErrorCode::invalid_argument, "steps must be >= 0");
  check_target(target);
  IntervalSet current = IntervalSet::normalized(
      std::vector<Interval>(target.parts().begin(), target.parts().end()));
  for (int n = 0; n < steps; ++n) {
    current = one_step_preimage(map, current);
  }
  return current;
}

Prop1Report prop1_check(const MapSpec& map, int critical_index,
                        const std::vector<double>& eps_grid, int max_steps) {
  if (max_steps < 1) fail(ErrorCode::invalid_argument, "need max_steps >= 1");
  if (eps_grid.empty()) fail(ErrorCode::invalid_argument, "empty eps grid");
  const auto& critical = map.critical_points();
  if (critical_index < 0 ||
      critical_index >= static_cast<int>(critical.size())) {
    fail(ErrorCode::invalid_argument, "critical point index out of range");
  }
  double c = critical[critical_index].location;
  for (double eps : eps_grid) {
    if (!(eps > 0.0) || c - eps < 0.0 || c + eps > 1.0) {
      fail(ErrorCode::invalid_argument,
           "eps must be positive with B(c, eps) inside [0,1]");
    }
  }

  Prop1Report report;
  report.max_ratio = -1.0;
  std::vector<std::pair<double, double>> per_eps_max;  // (eps, max ratio)
  for (double eps : eps_grid) {
    IntervalSet e = IntervalSet::normalized({{c - eps, c + eps}});
    double eps_max = -1.0;
    for (int n = 0; n <= max_steps; ++n) {
      if (n > 0) e = one_step_preimage(map, e);
      double m = static_cast<double>(e.measure());
      double ratio = static_cast<double>(e.measure() / eps);
      report.grid.push_back({n, eps, m, ratio});
      eps_max = std::max(eps_max, ratio);
      if (ratio > report.max_ratio) {
        report.max_ratio = ratio;
        report.argmax_n = n;
        report.argmax_eps = eps;
      }
    }
    per_eps_max.emplace_back(eps, eps_max);
  }

  std::sort(per_eps_max.begin(), per_eps_max.end());
  if (per_eps_max.size() >= 2) {
    double r0 = per_eps_max[0].second;
    double r1 = per_eps_max[1].second;
    report.bounded = std::max(r0, r1) <= 2.0 * std::min(r0, r1);
  } else {
    report.bounded = true;
  }
  return report;
}

namespace {

// A random union of up to 3 disjoint intervals totaling measure `size`.
IntervalSet random_target(std::mt19937_64& gen, double size) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    int pieces = 1 + static_cast<int>(gen() % 3);
    std::vector<double> cuts{0.0, size};
    for (int i = 1; i < pieces; ++i) cuts.push_back(uniform01(gen) * size);
    std::sort(cuts.begin(), cuts.end());

    std::vector<Interval> placed;
    bool ok = true;
    for (int i = 0; i < pieces && ok; ++i) {
      double len = cuts[i + 1] - cuts[i];
      if (len <= 0.0) continue;
      bool found = false;
      for (int tries = 0; tries < 50 && !found; ++tries) {
        double lo = uniform01(gen) * (1.0 - len);
        Interval cand{lo, lo + len};
        found = true;
        for (const Interval& q : placed) {
          if (cand.lo < q.hi + 1e-9 && q.lo < cand.hi + 1e-9) {
            found = false;
            break;
          }
        }
        if (found) placed.push_back(cand);
      }
      ok = found;
    }
    if (ok && !placed.empty()) return IntervalSet::normalized(placed);
  }
  double lo = uniform01(gen) * (1.0 - size);
  return IntervalSet::normalized({{lo, lo + size}});
}

}  // namespace

Prop2Report prop2_check(const MapSpec& map, const std::vector<double>& sizes,
                        int max_steps, int trials, std::uint64_t seed) {
  if (sizes.empty()) fail(ErrorCode::invalid_argument, "empty size list");
  for (double s : sizes) {
    if (!(s > 0.0 && s <= 0.1)) {
      fail(ErrorCode::invalid_argument, "sizes must lie in (0, 0.1]");
    }
  }
  if (trials < 10) fail(ErrorCode::invalid_argument, "need trials >= 10");
  if (max_steps < 1) fail(ErrorCode::invalid_argument, "need max_steps >= 1");

  Prop2Report report;
  report.sizes = sizes;
  report.seed = seed;
  report.max_steps = max_steps;
  report.trials = trials;
  report.l_max = map.l_max();
  report.reference_exponent = 1.0 / report.l_max;

  for (std::size_t si = 0; si < sizes.size(); ++si) {
    double s = sizes[si];
    std::vector<std::pair<std::string, IntervalSet>> targets;

    // Worst-case targets centered at the one-sided critical values; these
    // exercise the 1/l_max exponent.
    for (const CriticalPoint& cp : map.critical_points()) {
      for (double v : {cp.value_left, cp.value_right}) {
        double lo = std::max(0.0, v - s * 0.5);
        double hi = std::min(1.0, v + s * 0.5);
        if (hi > lo) {
          targets.emplace_back("critical", IntervalSet::normalized({{lo, hi}}));
        }
      }
    }
    for (int t = 0; t < trials; ++t) {
      std::mt19937_64 gen(derive_seed(seed, si * 4096 + t));
      targets.emplace_back("random" + std::to_string(t),
                           random_target(gen, s));
    }

    double size_worst = 0.0;
    for (auto& [kind, target] : targets) {
      double target_measure = static_cast<double>(target.measure());
      IntervalSet e = target;
      double worst = target_measure;
      int worst_n = 0;
      report.grid.push_back({s, kind, target_measure, 0, target_measure});
      for (int n = 1; n <= max_steps; ++n) {
        e = one_step_preimage(map, e);
        double m = static_cast<double>(e.measure());
        report.grid.push_back({s, kind, target_measure, n, m});
        if (m > worst) {
          worst = m;
          worst_n = n;
        }
      }
      report.targets.push_back({s, kind, target_measure, worst_n, worst});
      size_worst = std::max(size_worst, worst);
    }
    report.worst_by_size.push_back(size_worst);
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    lx.push_back(std::log(sizes[i]));
    ly.push_back(std::log(report.worst_by_size[i]));
  }
  report.slope = fit_slope(lx, ly, &report.intercept);
  return report;
}

const char* outcome_name(WanderReport::Outcome o) {
  switch (o) {
    case WanderReport::Outcome::collision: return "collision";
    case WanderReport::Outcome::straddle: return "straddle";
    case WanderReport::Outcome::disjoint: return "disjoint";
  }
  return "?";
}

WanderReport wandering_search(const MapSpec& map, Interval start,
                              int max_steps) {
  if (!(start.lo >= 0.0 && start.hi <= 1.0 && start.lo < start.hi)) {
    fail(ErrorCode::invalid_argument,
         "start interval must lie in [0,1] with positive measure");
  }
  if (max_steps < 1) fail(ErrorCode::invalid_argument, "need max_steps >= 1");

  WanderReport report;
  report.start = start;

  std::vector<Interval> iterates{start};  // sorted by lo
  Interval cur = start;
  for (int k = 1; k <= max_steps; ++k) {
    // f^k|_J is a homeomorphism only while the previous iterate sits inside a
    // single branch; otherwise condition (c) fails and the search stops.
    const Branch& b = map.branch_at(cur.lo, Side::right);
    if (cur.hi > b.domain.hi) {
      report.outcome = WanderReport::Outcome::straddle;
      report.straddle_step = k;
      report.disjoint_count = k - 1;
      return report;
    }
    Real ia = b.f(cur.lo);
    Real ib = b.f(cur.hi);
    cur = b.orientation == Orientation::increasing ? Interval{ia, ib}
                                                   : Interval{ib, ia};

    auto it = std::lower_bound(
        iterates.begin(), iterates.end(), cur,
        [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
    // Open-interval intersection; a sub-tolerance overlap is
    // indistinguishable from touching endpoints at floating precision.
    bool hit = false;
    if (it != iterates.end() && it->lo < cur.hi - IntervalSet::kTouchTol) {
      hit = true;
    }
    if (it != iterates.begin() &&
        (it - 1)->hi > cur.lo + IntervalSet::kTouchTol) {
      hit = true;
    }
    if (hit) {
      report.outcome = WanderReport::Outcome::collision;
      report.first_collision = k;
      report.disjoint_count = k - 1;
      return report;
    }
    iterates.insert(it, cur);
  }
  report.outcome = WanderReport::Outcome::disjoint;
  report.disjoint_count = max_steps;
  return report;
}

}  // namespace intervalkit
