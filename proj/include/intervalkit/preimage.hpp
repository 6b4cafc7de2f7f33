#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "intervalkit/interval.hpp"
#include "intervalkit/map.hpp"

namespace intervalkit {

/// Solves f(x) = y on one branch to residual |f(x)-y| < 1e-12, or nullopt if
/// y lies outside the branch's value range. Bracketed bisection refined by a
/// Newton step, falling back to pure bisection where |Df| is small (near
/// critical endpoints). Raises NoConvergence after 200 iterations, which
/// signals a malformed (non-monotone) branch.
std::optional<Real> invert_branch(const Branch& branch, Real y);

// Exact one-step preimage by branchwise endpoint inversion.
IntervalSet one_step_preimage(const MapSpec& map, const IntervalSet& target);

// n-step preimage f^-n(target); n = 0 returns the normalized target.
IntervalSet preimage_set(const MapSpec& map, const IntervalSet& target,
                         int steps);

struct Prop1Cell {
  int n = 0;
  double eps = 0.0;
  double measure = 0.0;
  double ratio = 0.0;  // measure / eps
};

struct Prop1Report {
  std::vector<Prop1Cell> grid;
  double max_ratio = 0.0;
  int argmax_n = 0;
  double argmax_eps = 0.0;
  // Max ratio stable (within factor 2) across the two smallest eps.
  bool bounded = false;
};

// Measures E_n(c, eps) = f^-n(B(c, eps)) over the full (n, eps) grid.
Prop1Report prop1_check(const MapSpec& map, int critical_index,
                        const std::vector<double>& eps_grid, int max_steps);

struct Prop2Cell {
  double size = 0.0;
  std::string target_kind;  // "critical" or "random<i>"
  double target_measure = 0.0;
  int n = 0;
  double measure = 0.0;  // |f^-n(A)|
};

struct Prop2TargetSummary {
  double size = 0.0;
  std::string target_kind;
  double target_measure = 0.0;
  int worst_n = 0;
  double worst_measure = 0.0;
};

struct Prop2Report {
  std::vector<Prop2Cell> grid;  // one cell per (target, n)
  std::vector<Prop2TargetSummary> targets;
  std::vector<double> sizes;
  std::vector<double> worst_by_size;
  double slope = 0.0;      // log-log fit of worst measure vs size
  double intercept = 0.0;
  double l_max = 1.0;
  double reference_exponent = 1.0;  // 1 / l_max
  std::uint64_t seed = 0;
  int max_steps = 0;
  int trials = 0;
};

// Random targets are unions of up to 3 intervals totaling measure s, placed
// uniformly with a recorded seed; worst-case targets centered at the critical
// values are always included so the 1/l_max exponent is actually exercised.
Prop2Report prop2_check(const MapSpec& map, const std::vector<double>& sizes,
                        int max_steps, int trials, std::uint64_t seed);

struct WanderReport {
  enum class Outcome { collision, straddle, disjoint };

  Interval start;
  Outcome outcome = Outcome::disjoint;
  int first_collision = -1;  // smallest k with f^k(J) meeting an earlier iterate
  int straddle_step = -1;    // smallest k whose image could not be formed
  int disjoint_count = 0;    // forward iterates verified pairwise disjoint
};

const char* outcome_name(WanderReport::Outcome o);

// Iterates J forward by endpoint images while f^k stays a homeomorphism on J
// (an iterate straddling a branch boundary is a hard stop) and tests pairwise
// disjointness incrementally. Checks conditions (a) and (c) of the wandering
// definition only; basins of periodic attractors are out of scope.
WanderReport wandering_search(const MapSpec& map, Interval start,
                              int max_steps);

}  // namespace intervalkit
