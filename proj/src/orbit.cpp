#include "intervalkit/orbit.hpp"

#include <cmath>

namespace intervalkit {

namespace {

struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  bool degenerate = false;  // zero variance in y
};

LinFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  LinFit fit;
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (syy < 1e-30) {
    fit.degenerate = true;
    fit.intercept = my;
    fit.r2 = 1.0;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = syy - fit.slope * sxy;
  fit.r2 = 1.0 - std::max(0.0, ss_res) / syy;
  return fit;
}

constexpr double kGoodnessThreshold = 0.9;

// Fits both a geometric and a power-law tail to the trailing log-terms and
// keeps the better one (ties to geometric).
TailFit fit_tail(const std::vector<double>& log_terms) {
  TailFit out;
  int n = static_cast<int>(log_terms.size());
  int window = std::max(5, n / 2);
  if (window > n) window = n;
  out.window = window;
  if (n < 5) return out;  // goodness 0 -> inconclusive

  std::vector<double> idx, logn, ys;
  for (int i = n - window; i < n; ++i) {
    idx.push_back(static_cast<double>(i + 1));  // term index n, 1-based
    logn.push_back(std::log(static_cast<double>(i + 1)));
    ys.push_back(log_terms[i]);
  }
  LinFit geo = linear_fit(idx, ys);
  LinFit pow_fit = linear_fit(logn, ys);
  if (geo.r2 >= pow_fit.r2) {
    out.model = TailFit::Model::geometric;
    out.rate = geo.degenerate ? 1.0 : std::exp(geo.slope);
    out.goodness = geo.r2;
  } else {
    out.model = TailFit::Model::power;
    out.rate = pow_fit.slope;
    out.goodness = pow_fit.r2;
  }
  return out;
}

SummabilityReport build_report(int series,
                               const std::vector<double>& log_terms) {
  SummabilityReport report;
  report.series = series;
  report.terms.reserve(log_terms.size());
  report.partial_sums.reserve(log_terms.size());
  double sum = 0.0;
  for (double lt : log_terms) {
    double t = std::exp(lt);
    sum += t;
    report.terms.push_back(t);
    report.partial_sums.push_back(sum);
  }
  report.tail_fit = fit_tail(log_terms);

  const TailFit& fit = report.tail_fit;
  if (fit.goodness < kGoodnessThreshold || fit.window < 5) {
    report.verdict = SummabilityReport::Verdict::inconclusive;
  } else if (fit.model == TailFit::Model::geometric) {
    report.verdict = fit.rate < 1.0 ? SummabilityReport::Verdict::converges
                                    : SummabilityReport::Verdict::diverges;
  } else {
    report.verdict = fit.rate < -1.0 ? SummabilityReport::Verdict::converges
                                     : SummabilityReport::Verdict::diverges;
  }
  return report;
}

void require_clean(const OrbitRecord& record) {
  if (record.hit_critical) {
    fail(ErrorCode::invalid_argument,
         "orbit hit the critical set at step " +
             std::to_string(record.hit_step) +
             "; summability terms are undefined");
  }
  if (record.points.empty()) {
    fail(ErrorCode::invalid_argument, "empty orbit record");
  }
}

}  // namespace

const char* verdict_name(SummabilityReport::Verdict v) {
  switch (v) {
    case SummabilityReport::Verdict::converges: return "converges";
    case SummabilityReport::Verdict::diverges: return "diverges";
    case SummabilityReport::Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* model_name(TailFit::Model m) {
  return m == TailFit::Model::geometric ? "geometric" : "power";
}

OrbitRecord critical_orbit(const MapSpec& map, int critical_index, Side side,
                           int steps, TieBreak tie_break) {
  if (steps < 1) fail(ErrorCode::invalid_argument, "orbit length must be >= 1");
  if (side == Side::interior) {
    fail(ErrorCode::side_required, "critical orbit needs a departing side");
  }
  const auto& critical = map.critical_points();
  if (critical_index < 0 ||
      critical_index >= static_cast<int>(critical.size())) {
    fail(ErrorCode::invalid_argument, "critical point index out of range");
  }
  const CriticalPoint& c = critical[critical_index];

  OrbitRecord record;
  record.critical_index = critical_index;
  record.side = side;
  record.departing_order = c.order(side);
  record.points.reserve(steps);
  record.log_deriv.reserve(steps);
  record.nearest.reserve(steps);

  double p = map.eval(c.location, side);
  double cum = 0.0;
  for (int n = 1; n <= steps; ++n) {
    double dist = 0.0;
    bool tie = false;
    int near = map.nearest_critical_index(p, &dist, &tie,
                                          tie_break == TieBreak::upper);
    if (near >= 0 && dist <= OrbitRecord::kCriticalHitTol) {
      record.hit_critical = true;
      record.hit_step = n;
      record.hit_value = p;
      break;
    }
    record.points.push_back(p);
    cum += std::log(std::abs(map.deriv(p, 1)));
    record.log_deriv.push_back(cum);
    NearestCritical nc;
    nc.index = near;
    if (near >= 0) {
      nc.approach_side =
          p < critical[near].location ? Side::left : Side::right;
      nc.distance = dist;
      nc.tie = tie;
    }
    record.nearest.push_back(nc);
    if (n < steps) p = map.eval(p);
  }
  return record;
}

SummabilityReport summability_series_2(const OrbitRecord& record) {
  require_clean(record);
  std::vector<double> log_terms;
  log_terms.reserve(record.log_deriv.size());
  for (double ld : record.log_deriv) {
    log_terms.push_back(-ld / record.departing_order);
  }
  return build_report(2, log_terms);
}

SummabilityReport summability_series_1(const MapSpec& map,
                                       const OrbitRecord& record) {
  require_clean(record);
  const auto& critical = map.critical_points();
  if (critical.empty()) {
    fail(ErrorCode::invalid_argument,
         "series (1) needs a nonempty critical set");
  }
  double lc = record.departing_order;
  std::vector<double> log_terms;
  log_terms.reserve(record.points.size());
  for (std::size_t i = 0; i < record.points.size(); ++i) {
    const NearestCritical& nc = record.nearest[i];
    double lt = critical[nc.index].order(nc.approach_side);
    log_terms.push_back(
        ((lt - lc) * std::log(nc.distance) - record.log_deriv[i]) / lc);
  }
  return build_report(1, log_terms);
}

GrowthCheck derivative_growth_check(const OrbitRecord& record) {
  int n = static_cast<int>(record.log_deriv.size());
  if (n < 20) {
    fail(ErrorCode::invalid_argument,
         "growth check needs an orbit of at least 20 points");
  }
  int start = n / 2;
  std::vector<double> xs, ys;
  double tail_min = record.log_deriv[start];
  for (int i = start; i < n; ++i) {
    xs.push_back(static_cast<double>(i + 1));
    ys.push_back(record.log_deriv[i]);
    tail_min = std::min(tail_min, record.log_deriv[i]);
  }
  LinFit fit = linear_fit(xs, ys);
  GrowthCheck check;
  check.slope = fit.degenerate ? 0.0 : fit.slope;
  check.grows = check.slope > 1e-9;
  check.min_log_deriv_tail = tail_min;
  return check;
}

}  // namespace intervalkit
