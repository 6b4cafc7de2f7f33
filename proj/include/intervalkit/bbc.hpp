#pragma once

#include <cstdint>
#include <vector>

#include "intervalkit/interval.hpp"
#include "intervalkit/map.hpp"

namespace intervalkit {

/// Critical neighborhood N_delta = union over c of {x : |f(x)-f(c+-)| < delta},
/// measured through the image distance and solved per side on the adjacent
/// branch by endpoint inversion. The one-sided pieces meeting at c merge into
/// a single component only when f(c-) == f(c+).
IntervalSet n_delta(const MapSpec& map, double delta);

struct FirstEntryStats {
  double delta = 0.0;
  double min_first_entry_deriv = 0.0;  // 0 when no sample entered
  double argmin_x = 0.0;               // sample attaining the minimum
  int entry_time = -1;
  int samples_used = 0;
  int never_entered = 0;
};

// Seeded uniform samples; for each, the first n <= horizon with
// f^n(x) in N_delta (n = 0 counts, |Df^0| = 1) and |Df^n(x)| accumulated in
// log space. Points within 1e-13 of the boundary of N_delta count as entered.
// Samples that never enter are excluded from the minimum but counted.
FirstEntryStats first_entry_stats(const MapSpec& map, double delta,
                                  int samples, int horizon,
                                  std::uint64_t seed);

struct BBCReport {
  enum class Verdict { bounded, degrading, inconclusive };

  std::vector<double> delta_grid;
  std::vector<FirstEntryStats> per_delta;
  Verdict verdict = Verdict::inconclusive;
  int samples = 0;
  int horizon = 0;
  std::uint64_t seed = 0;
};

const char* verdict_name(BBCReport::Verdict v);

// Runs first_entry_stats per delta (grid decreasing, >= 3 values). Verdict is
// `bounded` when the minima across the two smallest deltas agree within
// factor 2, `degrading` when minima decay monotonically by more than factor 2
// per decade, `inconclusive` otherwise.
BBCReport bbc_scan(const MapSpec& map, const std::vector<double>& delta_grid,
                   int samples, int horizon, std::uint64_t seed);

}  // namespace intervalkit
