#pragma once

#include <vector>

#include "intervalkit/map.hpp"

namespace intervalkit {

enum class TieBreak { lower, upper };

struct NearestCritical {
  int index = -1;
  Side approach_side = Side::left;  // side of the critical point facing the orbit point
  double distance = 0.0;
  bool tie = false;
};

/// Forward orbit of a one-sided critical value. points[i] = f^{i+1}(c) and
/// log_deriv[i] = log|Df^{i+1}(f(c))| accumulated as a running sum of
/// log|Df| along the orbit; products are never formed directly.
struct OrbitRecord {
  static constexpr double kCriticalHitTol = 1e-12;

  int critical_index = 0;
  Side side = Side::right;
  double departing_order = 1.0;  // l(c, side) of the side the orbit leaves from
  std::vector<double> points;
  std::vector<double> log_deriv;
  std::vector<NearestCritical> nearest;

  // Set when some f^n(c) lands within kCriticalHitTol of the critical set;
  // the offending point is not appended and iteration stops there.
  bool hit_critical = false;
  int hit_step = 0;
  double hit_value = 0.0;
};

OrbitRecord critical_orbit(const MapSpec& map, int critical_index, Side side,
                           int steps, TieBreak tie_break = TieBreak::lower);

struct TailFit {
  enum class Model { geometric, power };
  Model model = Model::geometric;
  double rate = 0.0;      // geometric ratio, or power-law exponent
  double goodness = 0.0;  // R^2 of the chosen fit
  int window = 0;         // number of trailing terms fitted
};

struct SummabilityReport {
  enum class Verdict { converges, diverges, inconclusive };

  int series = 2;  // 1 or 2
  std::vector<double> terms;
  std::vector<double> partial_sums;
  TailFit tail_fit;
  Verdict verdict = Verdict::inconclusive;
};

const char* verdict_name(SummabilityReport::Verdict v);
const char* model_name(TailFit::Model m);

// Second summability condition: term[n] = |Df^n(f(c))|^{-1/l(c)}, with l(c)
// taken on the departing side. Computed in log space.
SummabilityReport summability_series_2(const OrbitRecord& record);

// First summability condition: term[n] =
//   (|f^n(c)-cl|^{l(cl)} / (|f^n(c)-cl|^{l(c)} |Df^n(f(c))|))^{1/l(c)}
// where cl is the critical point nearest f^n(c) and its order is taken on the
// side from which the orbit point approaches it.
SummabilityReport summability_series_1(const MapSpec& map,
                                       const OrbitRecord& record);

struct GrowthCheck {
  bool grows = false;
  double min_log_deriv_tail = 0.0;
  double slope = 0.0;
};

// Fits a trend to log|Df^n| over the last half of the orbit; requires at
// least 20 recorded points.
GrowthCheck derivative_growth_check(const OrbitRecord& record);

}  // namespace intervalkit
