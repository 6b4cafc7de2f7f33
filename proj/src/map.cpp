#include "intervalkit/map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace intervalkit {

namespace {

constexpr double kLimitConsistencyTol = 1e-8;
constexpr double kContinuousValueTol = 1e-12;
constexpr double kSchwarzianBoundaryTol = 1e-8;
constexpr double kOrderCancellationFloor = 1e-11;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::out_of_domain: return "OutOfDomain";
    case ErrorCode::side_required: return "SideRequired";
    case ErrorCode::undefined_derivative: return "UndefinedDerivative";
    case ErrorCode::singular_derivative: return "SingularDerivative";
    case ErrorCode::unknown_family: return "UnknownFamily";
    case ErrorCode::invalid_params: return "InvalidParams";
    case ErrorCode::degenerate_fit: return "DegenerateFit";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::config_error: return "ConfigError";
    case ErrorCode::execution_error: return "ExecutionError";
  }
  return "Unknown";
}

const char* side_name(Side side) {
  switch (side) {
    case Side::left: return "left";
    case Side::interior: return "interior";
    case Side::right: return "right";
  }
  return "?";
}

const char* orientation_name(Orientation o) {
  return o == Orientation::increasing ? "increasing" : "decreasing";
}

double CriticalPoint::order(Side side) const {
  if (side == Side::left) return order_left;
  if (side == Side::right) return order_right;
  fail(ErrorCode::side_required, "critical order query needs a side");
}

double CriticalPoint::value(Side side) const {
  if (side == Side::left) return value_left;
  if (side == Side::right) return value_right;
  fail(ErrorCode::side_required, "critical value query needs a side");
}

MapSpec::MapSpec(std::string name, std::map<std::string, double> params,
                 std::vector<Branch> branches,
                 std::vector<CriticalPoint> critical)
    : name_(std::move(name)),
      params_(std::move(params)),
      branches_(std::move(branches)),
      critical_(std::move(critical)) {
  if (branches_.empty()) {
    fail(ErrorCode::invalid_argument, "map needs at least one branch");
  }
  if (branches_.front().domain.lo != 0.0 || branches_.back().domain.hi != 1.0) {
    fail(ErrorCode::invalid_argument, "branch domains must cover [0,1]");
  }
  edges_.reserve(branches_.size() + 1);
  edges_.push_back(0.0);
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const Branch& b = branches_[i];
    if (!(b.domain.lo < b.domain.hi)) {
      fail(ErrorCode::invalid_argument, "empty branch domain");
    }
    if (b.domain.lo != edges_.back()) {
      fail(ErrorCode::invalid_argument,
           "branch domains must abut exactly (gap or overlap at " +
               fmt(b.domain.lo) + ")");
    }
    if (!b.f || !b.df1) {
      fail(ErrorCode::invalid_argument, "branch needs f and df1");
    }
    if (std::abs(b.f(b.domain.lo) - b.left_value) > kLimitConsistencyTol ||
        std::abs(b.f(b.domain.hi) - b.right_value) > kLimitConsistencyTol) {
      fail(ErrorCode::invalid_argument,
           "branch limit values inconsistent with f");
    }
    edges_.push_back(b.domain.hi);
  }

  std::sort(critical_.begin(), critical_.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) {
              return a.location < b.location;
            });
  for (const CriticalPoint& c : critical_) {
    if (c.order_left < 1.0 || c.order_right < 1.0) {
      fail(ErrorCode::invalid_argument, "critical orders must be >= 1");
    }
    bool on_edge = false;
    for (std::size_t i = 1; i + 1 < edges_.size(); ++i) {
      if (edges_[i] == c.location) on_edge = true;
    }
    if (!on_edge) {
      fail(ErrorCode::invalid_argument,
           "critical point " + fmt(c.location) +
               " is not an interior branch boundary");
    }
  }
  // Every interior branch boundary is a map discontinuity or critical point.
  for (std::size_t i = 1; i + 1 < edges_.size(); ++i) {
    if (!critical_at(edges_[i])) {
      fail(ErrorCode::invalid_argument,
           "interior branch boundary " + fmt(edges_[i]) +
               " missing from the critical set");
    }
  }
}

const CriticalPoint* MapSpec::critical_at(double x) const {
  auto it = std::lower_bound(critical_.begin(), critical_.end(), x,
                             [](const CriticalPoint& c, double v) {
                               return c.location < v;
                             });
  if (it != critical_.end() && it->location == x) return &*it;
  return nullptr;
}

int MapSpec::branch_index_at(double x, Side side,
                             bool strict_at_critical) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    fail(ErrorCode::out_of_domain, "x = " + fmt(x) + " outside [0,1]");
  }
  if (side == Side::left) {
    if (x == 0.0) fail(ErrorCode::out_of_domain, "no branch left of 0");
    auto it = std::lower_bound(edges_.begin(), edges_.end(), x);
    return static_cast<int>(it - edges_.begin()) - 1;
  }
  if (side == Side::right) {
    if (x == 1.0) fail(ErrorCode::out_of_domain, "no branch right of 1");
    auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    return static_cast<int>(it - edges_.begin()) - 1;
  }
  if (const CriticalPoint* c = critical_at(x)) {
    if (strict_at_critical ||
        std::abs(c->value_left - c->value_right) > kContinuousValueTol) {
      fail(ErrorCode::side_required,
           "x = " + fmt(x) + " is a critical point; query a side");
    }
    // Continuous critical point: either side gives the same value.
    auto it = std::lower_bound(edges_.begin(), edges_.end(), x);
    return static_cast<int>(it - edges_.begin()) - 1;
  }
  auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  int idx = static_cast<int>(it - edges_.begin()) - 1;
  return std::min(idx, static_cast<int>(branches_.size()) - 1);
}

const Branch& MapSpec::branch_at(double x, Side side) const {
  return branches_[branch_index_at(x, side, false)];
}

double MapSpec::eval(double x, Side side) const {
  return branches_[branch_index_at(x, side, false)].f(x);
}

double MapSpec::deriv(double x, int order, Side side) const {
  if (order < 1 || order > 3) {
    fail(ErrorCode::invalid_argument, "derivative order must be 1, 2 or 3");
  }
  const Branch& b = branches_[branch_index_at(x, side, true)];
  const RealFn& fn = order == 1 ? b.df1 : (order == 2 ? b.df2 : b.df3);
  if (!fn) {
    fail(ErrorCode::undefined_derivative,
         "branch supplies no derivative of order " + std::to_string(order));
  }
  return fn(x);
}

double MapSpec::schwarzian(double x) const {
  const Branch& b = branches_[branch_index_at(x, Side::interior, true)];
  if (!b.df2 || !b.df3) {
    fail(ErrorCode::undefined_derivative,
         "Schwarzian needs second and third derivatives");
  }
  Real d1 = b.df1(x);
  if (std::abs(d1) < kSingularDerivTol) {
    fail(ErrorCode::singular_derivative,
         "|Df| below tolerance at x = " + fmt(x));
  }
  Real r2 = b.df2(x) / d1;
  return static_cast<double>(b.df3(x) / d1 - 1.5L * r2 * r2);
}

int MapSpec::nearest_critical_index(double x, double* distance, bool* tie,
                                    bool prefer_upper) const {
  if (critical_.empty()) {
    if (distance) *distance = std::numeric_limits<double>::infinity();
    if (tie) *tie = false;
    return -1;
  }
  int best = 0;
  double best_d = std::abs(x - critical_[0].location);
  bool tied = false;
  for (std::size_t i = 1; i < critical_.size(); ++i) {
    double d = std::abs(x - critical_[i].location);
    if (d < best_d) {
      best = static_cast<int>(i);
      best_d = d;
      tied = false;
    } else if (d == best_d) {
      tied = true;
      if (prefer_upper) best = static_cast<int>(i);
    }
  }
  if (distance) *distance = best_d;
  if (tie) *tie = tied;
  return best;
}

double MapSpec::l_max() const {
  double m = 1.0;
  for (const CriticalPoint& c : critical_) {
    m = std::max({m, c.order_left, c.order_right});
  }
  return m;
}

nlohmann::json MapSpec::to_json() const {
  nlohmann::json j;
  j["name"] = name_;
  j["params"] = params_;
  nlohmann::json branches = nlohmann::json::array();
  for (const Branch& b : branches_) {
    branches.push_back({{"lo", static_cast<double>(b.domain.lo)},
                        {"hi", static_cast<double>(b.domain.hi)},
                        {"orientation", orientation_name(b.orientation)},
                        {"left_value", static_cast<double>(b.left_value)},
                        {"right_value", static_cast<double>(b.right_value)}});
  }
  j["branches"] = branches;
  nlohmann::json critical = nlohmann::json::array();
  for (const CriticalPoint& c : critical_) {
    critical.push_back({{"location", c.location},
                        {"order_left", c.order_left},
                        {"order_right", c.order_right},
                        {"value_left", c.value_left},
                        {"value_right", c.value_right}});
  }
  j["critical_points"] = critical;
  return j;
}

const char* verdict_name(SchwarzianReport::Verdict v) {
  switch (v) {
    case SchwarzianReport::Verdict::holds: return "holds";
    case SchwarzianReport::Verdict::boundary: return "boundary";
    case SchwarzianReport::Verdict::fails: return "fails";
  }
  return "?";
}

SchwarzianReport check_negative_schwarzian(const MapSpec& map,
                                           int samples_per_branch) {
  if (samples_per_branch < 2) {
    fail(ErrorCode::invalid_argument, "need at least 2 samples per branch");
  }
  SchwarzianReport report;
  report.samples_per_branch = samples_per_branch;
  report.worst_value = -std::numeric_limits<double>::infinity();
  int branch_index = 0;
  for (const Branch& b : map.branches()) {
    double w = static_cast<double>(b.domain.length());
    double a = static_cast<double>(b.domain.lo) + 1e-4 * w;
    double z = static_cast<double>(b.domain.hi) - 1e-4 * w;
    SchwarzianBranchSample sample;
    sample.branch = branch_index++;
    sample.worst_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples_per_branch; ++i) {
      double x = a + (z - a) * i / (samples_per_branch - 1);
      double s = map.schwarzian(x);
      if (s > sample.worst_value) {
        sample.worst_value = s;
        sample.worst_x = x;
      }
    }
    if (sample.worst_value > report.worst_value) {
      report.worst_value = sample.worst_value;
      report.worst_x = sample.worst_x;
    }
    report.per_branch.push_back(sample);
  }
  if (report.worst_value < -kSchwarzianBoundaryTol) {
    report.verdict = SchwarzianReport::Verdict::holds;
  } else if (report.worst_value <= kSchwarzianBoundaryTol) {
    report.verdict = SchwarzianReport::Verdict::boundary;
  } else {
    report.verdict = SchwarzianReport::Verdict::fails;
  }
  return report;
}

OrderFit estimate_critical_order(const MapSpec& map, const CriticalPoint& c,
                                 Side side) {
  if (side == Side::interior) {
    fail(ErrorCode::side_required, "order estimation needs a side");
  }
  const Branch& b = map.branch_at(c.location, side);
  Real w = b.domain.length();
  Real fc = b.f(c.location);
  Real floor = kOrderCancellationFloor *
               std::max<Real>(1.0, std::abs(fc));

  std::vector<double> xs, ys;
  for (int k = 4; k <= 24; ++k) {
    Real off = std::ldexp(w, -k);
    Real x = side == Side::left ? c.location - off : c.location + off;
    Real d = std::abs(b.f(x) - fc);
    if (d <= floor) continue;  // below the cancellation floor of f near f(c)
    xs.push_back(static_cast<double>(std::log(off)));
    ys.push_back(static_cast<double>(std::log(d)));
  }
  if (xs.size() < 5) {
    fail(ErrorCode::degenerate_fit,
         "fewer than 5 usable offsets for order fit at c = " +
             fmt(c.location) + " (" + side_name(side) + ")");
  }

  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - slope * sx) / n;
  double max_resid = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    max_resid = std::max(max_resid,
                         std::abs(ys[i] - (intercept + slope * xs[i])));
  }
  return {slope, max_resid, static_cast<int>(xs.size())};
}

}  // namespace intervalkit
