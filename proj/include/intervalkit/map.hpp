#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "intervalkit/errors.hpp"
#include "intervalkit/interval.hpp"

namespace intervalkit {

enum class Side { left = -1, interior = 0, right = 1 };
enum class Orientation { increasing, decreasing };

const char* side_name(Side side);
const char* orientation_name(Orientation o);

using RealFn = std::function<Real(Real)>;

/// One monotone piece of a piecewise C^1 map. `f` evaluates on the closed
/// domain and agrees with left_value/right_value at the ends; derivatives are
/// supplied analytically by whoever builds the branch (df2/df3 may be empty,
/// in which case dependent queries raise UndefinedDerivative).
struct Branch {
  Interval domain;
  Orientation orientation = Orientation::increasing;
  RealFn f;
  RealFn df1;
  RealFn df2;
  RealFn df3;
  Real left_value = 0.0;   // continuous extension at domain.lo
  Real right_value = 0.0;  // continuous extension at domain.hi

  Real value_min() const { return std::min(left_value, right_value); }
  Real value_max() const { return std::max(left_value, right_value); }
};

/// A point of the critical set with one-sided orders and one-sided values.
/// Order 1 marks a bounded-derivative point, order > 1 a genuine critical
/// point; the two sides may differ.
struct CriticalPoint {
  double location = 0.0;
  double order_left = 1.0;
  double order_right = 1.0;
  double value_left = 0.0;   // f(c-)
  double value_right = 0.0;  // f(c+)

  double order(Side side) const;
  double value(Side side) const;
};

/// Immutable piecewise-monotone interval map on [0,1]: an ordered list of
/// branches whose domains tile [0,1], plus the critical set sitting exactly on
/// the interior branch boundaries. All operations are pure; instances are safe
/// to share across threads.
class MapSpec {
 public:
  MapSpec(std::string name, std::map<std::string, double> params,
          std::vector<Branch> branches, std::vector<CriticalPoint> critical);

  const std::string& name() const { return name_; }
  const std::map<std::string, double>& params() const { return params_; }
  const std::vector<Branch>& branches() const { return branches_; }
  const std::vector<CriticalPoint>& critical_points() const { return critical_; }

  // f(x) on the indicated side. A side is required at critical points whose
  // one-sided values differ; at continuous critical points (f(c-) == f(c+))
  // an interior query returns the common value.
  double eval(double x, Side side = Side::interior) const;

  // Analytic derivative of order 1..3. Unlike eval, any query at a critical
  // point must name a side.
  double deriv(double x, int order, Side side = Side::interior) const;

  // Sf = D3f/Df - 1.5 (D2f/Df)^2; requires x away from the critical set and
  // |Df(x)| above tolerance.
  double schwarzian(double x) const;

  // Branch owning x when approached from `side`. `strict_at_critical`
  // controls whether an interior query at a continuous critical point is
  // allowed (eval semantics) or rejected (deriv semantics).
  int branch_index_at(double x, Side side, bool strict_at_critical) const;
  const Branch& branch_at(double x, Side side = Side::interior) const;

  // Exact-location lookup into the critical set; null when x is not critical.
  const CriticalPoint* critical_at(double x) const;

  // Index of the critical point closest to x. Exact ties go to the smaller
  // coordinate unless prefer_upper is set; `tie` reports that a tie occurred.
  int nearest_critical_index(double x, double* distance = nullptr,
                             bool* tie = nullptr,
                             bool prefer_upper = false) const;

  // Largest one-sided order over the whole critical set (1 if C is empty).
  double l_max() const;

  nlohmann::json to_json() const;

  static constexpr double kSingularDerivTol = 1e-12;

 private:
  std::string name_;
  std::map<std::string, double> params_;
  std::vector<Branch> branches_;
  std::vector<CriticalPoint> critical_;
  std::vector<double> edges_;  // branch boundaries, size branches_.size()+1
};

struct SchwarzianBranchSample {
  int branch = 0;
  double worst_value = 0.0;
  double worst_x = 0.0;
};

struct SchwarzianReport {
  enum class Verdict { holds, boundary, fails };
  Verdict verdict = Verdict::fails;
  double worst_value = 0.0;  // max sampled Sf over all branches
  double worst_x = 0.0;
  int samples_per_branch = 0;
  std::vector<SchwarzianBranchSample> per_branch;
};

const char* verdict_name(SchwarzianReport::Verdict v);

// Samples Sf on a per-branch grid that keeps a relative margin of 1e-4 off
// the branch ends (dodging the Df -> 0 singularity at critical endpoints).
// Affine branches (Sf == 0) land on `boundary`, not `fails`.
SchwarzianReport check_negative_schwarzian(const MapSpec& map,
                                           int samples_per_branch);

struct OrderFit {
  double l_hat = 0.0;
  double fit_residual = 0.0;  // max |residual| of the log-log linear fit
  int points_used = 0;
};

// Fits the slope of log|f(x)-f(c+-)| against log|x-c| over offsets 2^-k * w,
// k = 4..24, w = width of the adjacent branch. Points too close to the
// cancellation floor of |f(x)-f(c+-)| are discarded; fewer than 5 usable
// points raises DegenerateFit.
OrderFit estimate_critical_order(const MapSpec& map, const CriticalPoint& c,
                                 Side side);

}  // namespace intervalkit
