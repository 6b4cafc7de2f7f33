#include "intervalkit/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "intervalkit/bbc.hpp"
#include "intervalkit/config.hpp"
#include "intervalkit/families.hpp"
#include "intervalkit/orbit.hpp"
#include "intervalkit/preimage.hpp"
#include "intervalkit/rng.hpp"
#include "intervalkit/ulam.hpp"
#include "intervalkit/version.hpp"

namespace intervalkit {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt3(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

Side parse_side(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  fail(ErrorCode::config_error,
       "[analysis] side: expected left or right, got '" + s + "'");
}

// Rejects [analysis] keys the named analysis does not understand.
class KeyChecker {
 public:
  KeyChecker(const ConfigFile& cfg, std::string section)
      : cfg_(cfg), section_(std::move(section)) {
    allowed_.insert("name");
    allowed_.insert("seed");
  }
  void allow(const std::string& key) { allowed_.insert(key); }
  void finish() const {
    for (const std::string& key : cfg_.keys(section_)) {
      if (!allowed_.count(key)) {
        fail(ErrorCode::config_error,
             "unknown key '" + key + "' in [" + section_ + "]");
      }
    }
  }

 private:
  const ConfigFile& cfg_;
  std::string section_;
  std::set<std::string> allowed_;
};

struct AnalysisOutput {
  std::string verdict;
  std::vector<std::string> summary_lines;
  nlohmann::json body;
  nlohmann::json resolved;  // resolved [analysis] params
  std::vector<CsvFile> csvs;
};

int geti(const ConfigFile& cfg, const std::string& key, long long fallback,
         long long lo, long long hi) {
  long long v = cfg.get_int("analysis", key, fallback);
  if (v < lo || v > hi) {
    fail(ErrorCode::config_error, "[analysis] " + key + " out of range");
  }
  return static_cast<int>(v);
}

nlohmann::json list_json(const std::vector<double>& xs) {
  return nlohmann::json(xs);
}

// ---------------------------------------------------------------- analyses

AnalysisOutput run_orbit(const ConfigFile& cfg, const MapSpec& map,
                         std::uint64_t /*seed*/) {
  KeyChecker keys(cfg, "analysis");
  keys.allow("critical");
  keys.allow("side");
  keys.allow("n");
  keys.finish();
  int critical = geti(cfg, "critical", 0, 0, 1 << 20);
  std::string side_str = cfg.get("analysis", "side", "right");
  int n = geti(cfg, "n", 200, 1, 1 << 20);

  OrbitRecord rec = critical_orbit(map, critical, parse_side(side_str), n);

  AnalysisOutput out;
  out.resolved = {{"critical", critical}, {"side", side_str}, {"n", n}};
  out.verdict = rec.hit_critical ? "hit-critical" : "ok";
  out.body = {{"critical_index", rec.critical_index},
              {"side", side_name(rec.side)},
              {"departing_order", rec.departing_order},
              {"steps_recorded", rec.points.size()},
              {"hit_critical", rec.hit_critical},
              {"points", list_json(rec.points)},
              {"log_deriv", list_json(rec.log_deriv)}};
  if (rec.hit_critical) {
    out.body["hit_step"] = rec.hit_step;
    out.body["hit_value"] = rec.hit_value;
  }
  if (static_cast<int>(rec.points.size()) >= 20) {
    GrowthCheck growth = derivative_growth_check(rec);
    out.body["derivative_growth"] = {
        {"grows", growth.grows},
        {"slope", growth.slope},
        {"min_log_deriv_tail", growth.min_log_deriv_tail}};
  }

  std::ostringstream csv;
  csv << "n,point,log_deriv,nearest_index,nearest_distance\n";
  for (std::size_t i = 0; i < rec.points.size(); ++i) {
    csv << (i + 1) << ',' << g17(rec.points[i]) << ',' << g17(rec.log_deriv[i])
        << ',' << rec.nearest[i].index << ',' << g17(rec.nearest[i].distance)
        << '\n';
  }
  out.csvs.push_back({"orbit.csv", csv.str()});

  out.summary_lines.push_back("orbit of critical point " +
                              std::to_string(critical) + " (" + side_str +
                              "), " + std::to_string(rec.points.size()) +
                              " steps recorded");
  if (rec.hit_critical) {
    out.summary_lines.push_back("orbit hit the critical set at step " +
                                std::to_string(rec.hit_step));
  } else {
    out.summary_lines.push_back(
        "log|Df^n| at the end of the orbit: " + fmt3(rec.log_deriv.back()));
    if (out.body.contains("derivative_growth")) {
      out.summary_lines.push_back(
          std::string("derivative growth over the orbit tail: ") +
          (out.body["derivative_growth"]["grows"].get<bool>() ? "grows"
                                                              : "not-grows") +
          " (slope " + fmt3(out.body["derivative_growth"]["slope"].get<double>()) + ")");
    }
  }
  return out;
}

CsvFile series_csv(const std::string& name, const SummabilityReport& rep) {
  std::ostringstream csv;
  csv << "n,term,partial_sum\n";
  for (std::size_t i = 0; i < rep.terms.size(); ++i) {
    csv << (i + 1) << ',' << g17(rep.terms[i]) << ','
        << g17(rep.partial_sums[i]) << '\n';
  }
  return {name, csv.str()};
}

nlohmann::json series_json(const SummabilityReport& rep) {
  return {{"series", rep.series},
          {"verdict", verdict_name(rep.verdict)},
          {"terms", list_json(rep.terms)},
          {"partial_sums", list_json(rep.partial_sums)},
          {"sum", rep.partial_sums.empty() ? 0.0 : rep.partial_sums.back()},
          {"tail_fit",
           {{"model", model_name(rep.tail_fit.model)},
            {"rate", rep.tail_fit.rate},
            {"goodness", rep.tail_fit.goodness},
            {"window", rep.tail_fit.window}}}};
}

AnalysisOutput run_summability(const ConfigFile& cfg, const MapSpec& map,
                               std::uint64_t /*seed*/) {
  KeyChecker keys(cfg, "analysis");
  keys.allow("critical");
  keys.allow("side");
  keys.allow("n");
  keys.allow("series");
  keys.finish();
  int critical = geti(cfg, "critical", 0, 0, 1 << 20);
  std::string side_str = cfg.get("analysis", "side", "right");
  int n = geti(cfg, "n", 200, 1, 1 << 20);
  std::string which = cfg.get("analysis", "series", "both");
  if (which != "1" && which != "2" && which != "both") {
    fail(ErrorCode::config_error, "[analysis] series must be 1, 2 or both");
  }

  OrbitRecord rec = critical_orbit(map, critical, parse_side(side_str), n);
  if (rec.hit_critical) {
    AnalysisOutput out;
    out.resolved = {{"critical", critical},
                    {"side", side_str},
                    {"n", n},
                    {"series", which}};
    out.verdict = "hit-critical";
    out.body = {{"hit_critical", true}, {"hit_step", rec.hit_step}};
    out.summary_lines.push_back(
        "orbit hit the critical set at step " + std::to_string(rec.hit_step) +
        "; the map violates the standing hypotheses and no series was "
        "evaluated");
    return out;
  }

  AnalysisOutput out;
  out.resolved = {{"critical", critical},
                  {"side", side_str},
                  {"n", n},
                  {"series", which}};
  std::vector<SummabilityReport::Verdict> verdicts;
  if (which == "1" || which == "both") {
    SummabilityReport rep = summability_series_1(map, rec);
    out.body["series1"] = series_json(rep);
    out.csvs.push_back(series_csv("series1.csv", rep));
    verdicts.push_back(rep.verdict);
    out.summary_lines.push_back(
        "series (1): sum = " + fmt3(rep.partial_sums.back()) + ", verdict " +
        verdict_name(rep.verdict) + " (tail fit: " +
        model_name(rep.tail_fit.model) + ", rate " + fmt3(rep.tail_fit.rate) +
        ", R^2 " + fmt3(rep.tail_fit.goodness) + ")");
  }
  if (which == "2" || which == "both") {
    SummabilityReport rep = summability_series_2(rec);
    out.body["series2"] = series_json(rep);
    out.csvs.push_back(series_csv("series2.csv", rep));
    verdicts.push_back(rep.verdict);
    out.summary_lines.push_back(
        "series (2): sum = " + fmt3(rep.partial_sums.back()) + ", verdict " +
        verdict_name(rep.verdict) + " (tail fit: " +
        model_name(rep.tail_fit.model) + ", rate " + fmt3(rep.tail_fit.rate) +
        ", R^2 " + fmt3(rep.tail_fit.goodness) + ")");
  }
  out.summary_lines.push_back(
      "verdicts are tail-fit heuristics over the last half of the terms");

  bool any_div = false, any_inc = false;
  for (auto v : verdicts) {
    any_div |= v == SummabilityReport::Verdict::diverges;
    any_inc |= v == SummabilityReport::Verdict::inconclusive;
  }
  out.verdict = any_div ? "diverges" : (any_inc ? "inconclusive" : "converges");
  return out;
}

AnalysisOutput run_prop1(const ConfigFile& cfg, const MapSpec& map,
                         std::uint64_t /*seed*/) {
  KeyChecker keys(cfg, "analysis");
  keys.allow("critical");
  keys.allow("eps");
  keys.allow("n");
  keys.finish();
  int critical = geti(cfg, "critical", 0, 0, 1 << 20);
  std::vector<double> eps = cfg.get_list("analysis", "eps", {1e-2, 1e-3, 1e-4});
  int n = geti(cfg, "n", 20, 1, 1 << 10);

  Prop1Report rep = prop1_check(map, critical, eps, n);

  AnalysisOutput out;
  out.resolved = {{"critical", critical}, {"eps", list_json(eps)}, {"n", n}};
  out.verdict = rep.bounded ? "bounded" : "inconclusive";
  out.body = {{"max_ratio", rep.max_ratio},
              {"argmax_n", rep.argmax_n},
              {"argmax_eps", rep.argmax_eps},
              {"bounded", rep.bounded}};

  std::ostringstream csv;
  csv << "n,eps,measure,ratio\n";
  for (const Prop1Cell& cell : rep.grid) {
    csv << cell.n << ',' << g17(cell.eps) << ',' << g17(cell.measure) << ','
        << g17(cell.ratio) << '\n';
  }
  out.csvs.push_back({"prop1.csv", csv.str()});

  out.summary_lines.push_back(
      "max |f^-n(B(c,eps))| / eps = " + fmt3(rep.max_ratio) + " at n = " +
      std::to_string(rep.argmax_n) + ", eps = " + fmt3(rep.argmax_eps));
  out.summary_lines.push_back(
      std::string("ratio stability across the two smallest eps: ") +
      (rep.bounded ? "within factor 2" : "NOT within factor 2"));
  return out;
}

AnalysisOutput run_prop2(const ConfigFile& cfg, const MapSpec& map,
                         std::uint64_t seed) {
  KeyChecker keys(cfg, "analysis");
  keys.allow("sizes");
  keys.allow("n");
  keys.allow("trials");
  keys.finish();
  std::vector<double> sizes =
      cfg.get_list("analysis", "sizes", {1e-2, 3e-3, 1e-3, 3e-4, 1e-4});
  int n = geti(cfg, "n", 12, 1, 1 << 10);
  int trials = geti(cfg, "trials", 12, 10, 1 << 16);

  Prop2Report rep = prop2_check(map, sizes, n, trials, seed);

  AnalysisOutput out;
  out.resolved = {{"sizes", list_json(sizes)}, {"n", n}, {"trials", trials}};
  bool consistent = rep.slope >= rep.reference_exponent - 0.05;
  out.verdict = consistent ? "consistent" : "below-reference";
  out.body = {{"slope", rep.slope},
              {"intercept", rep.intercept},
              {"l_max", rep.l_max},
              {"reference_exponent", rep.reference_exponent},
              {"worst_by_size", list_json(rep.worst_by_size)},
              {"sizes", list_json(rep.sizes)}};

  nlohmann::json targets = nlohmann::json::array();
  for (const Prop2TargetSummary& t : rep.targets) {
    targets.push_back({{"size", t.size},
                       {"target_kind", t.target_kind},
                       {"target_measure", t.target_measure},
                       {"worst_n", t.worst_n},
                       {"worst_measure", t.worst_measure}});
  }
  out.body["targets"] = targets;

  std::ostringstream csv;
  csv << "size,target_kind,target_measure,n,measure\n";
  for (const Prop2Cell& cell : rep.grid) {
    csv << g17(cell.size) << ',' << cell.target_kind << ','
        << g17(cell.target_measure) << ',' << cell.n << ','
        << g17(cell.measure) << '\n';
  }
  out.csvs.push_back({"prop2.csv", csv.str()});

  out.summary_lines.push_back(
      "log-log slope of worst |f^-n(A)| vs |A|: " + fmt3(rep.slope) +
      " (reference 1/l_max = " + fmt3(rep.reference_exponent) + ")");
  return out;
}

// Closed-form invariant bin masses for families where the density is known;
// used only for reporting the distance of the computed density.
bool reference_bin_masses(const MapSpec& map, const Partition& part,
                          std::vector<double>* masses) {
  bool uniform = map.name() == "doubling";
  if (map.name() == "tent" && map.params().at("slope") == 2.0) uniform = true;
  bool arcsine = map.name() == "logistic" && map.params().at("mu") == 4.0;
  if (!uniform && !arcsine) return false;
  const double pi = std::acos(-1.0);
  masses->resize(part.bins());
  for (int i = 0; i < part.bins(); ++i) {
    Interval b = part.bin(i);
    if (uniform) {
      (*masses)[i] = b.length();
    } else {
      (*masses)[i] = 2.0 / pi *
                     (std::asin(std::sqrt(b.hi)) - std::asin(std::sqrt(b.lo)));
    }
  }
  return true;
}

AnalysisOutput run_density(const ConfigFile& cfg, const MapSpec& map,
                           std::uint64_t seed) {
  KeyChecker keys(cfg, "analysis");
  keys.allow("k");
  keys.allow("max_iters");
  keys.allow("tol");
  keys.allow("test_fns");
  keys.allow("restarts");
  keys.allow("export_operator");
  keys.finish();
  int k = geti(cfg, "k", 4096, 16, 1 << 22);
  int max_iters = geti(cfg, "max_iters", 20000, 1, 1 << 30);
  double tol = cfg.get_double("analysis", "tol", 1e-10);
  int test_fns = geti(cfg, "test_fns", 8, 1, 1 << 10);
  int restarts = geti(cfg, "restarts", 0, 0, 64);
  int export_operator = geti(cfg, "export_operator", 0, 0, 1);

  UlamOperator op = build_ulam(map, k);
  Density density = stationary_density(op, max_iters, tol);
  double residual = invariance_residual(map, density, test_fns);

  AnalysisOutput out;
  out.resolved = {{"k", k},
                  {"max_iters", max_iters},
                  {"tol", tol},
                  {"test_fns", test_fns},
                  {"restarts", restarts},
                  {"export_operator", export_operator}};
  out.verdict = density.converged ? "converged" : "not-converged";
  out.body = {{"k", k},
              {"converged", density.converged},
              {"iterations", density.iterations},
              {"residual", density.residual},
              {"stop_rule", density.stop_rule},
              {"invariance_residual", residual},
              {"operator_nonzeros", op.nonzeros()},
              {"operator_max_row_deviation", op.max_raw_row_sum_deviation()},
              {"renormalized_rows", op.renormalized_rows().size()}};

  out.summary_lines.push_back(
      "Ulam operator: k = " + std::to_string(k) + ", " +
      std::to_string(op.nonzeros()) + " nonzeros, max row-sum deviation " +
      fmt3(op.max_raw_row_sum_deviation()));
  out.summary_lines.push_back(
      "stationary density: " +
      std::string(density.converged ? "converged" : "NOT converged") +
      " after " + std::to_string(density.iterations) + " iterations (" +
      density.stop_rule + ", residual " + fmt3(density.residual) + ")");
  out.summary_lines.push_back("invariance residual over " +
                              std::to_string(test_fns) +
                              " cosine test functions: " + fmt3(residual));

  std::vector<double> ref;
  if (reference_bin_masses(map, op.partition(), &ref)) {
    double l1 = 0.0;
    for (int i = 0; i < k; ++i) {
      l1 += std::abs(density.values[i] / k - ref[i]);
    }
    out.body["l1_distance_to_reference"] = l1;
    out.summary_lines.push_back("L1 distance to the reference density: " +
                                fmt3(l1));
  }

  if (restarts > 0) {
    // Probe for other fixed points; reducible operators may have several.
    double spread = 0.0;
    std::vector<Density> all{density};
    for (int r = 0; r < restarts; ++r) {
      std::mt19937_64 gen(derive_seed(seed, 1000 + r));
      std::vector<double> start(k);
      for (double& v : start) v = 0.5 + uniform01(gen);
      all.push_back(stationary_density_from(op, start, max_iters, tol));
    }
    for (std::size_t a = 0; a < all.size(); ++a) {
      for (std::size_t b = a + 1; b < all.size(); ++b) {
        double l1 = 0.0;
        for (int i = 0; i < k; ++i) {
          l1 += std::abs(all[a].values[i] - all[b].values[i]) / k;
        }
        spread = std::max(spread, l1);
      }
    }
    out.body["fixed_point_spread"] = spread;
    out.summary_lines.push_back(
        "max pairwise L1 spread over " + std::to_string(restarts + 1) +
        " starting densities: " + fmt3(spread));
  }

  std::ostringstream csv;
  csv << "midpoint,value\n";
  for (int i = 0; i < k; ++i) {
    csv << g17(op.partition().midpoint(i)) << ',' << g17(density.values[i])
        << '\n';
  }
  out.csvs.push_back({"density.csv", csv.str()});
  if (export_operator) {
    out.csvs.push_back({"operator.txt", op.to_triplets()});
  }
  return out;
}

AnalysisOutput run_lp(const ConfigFile& cfg, const MapSpec& map,
                      std::uint64_t /*seed*/) {
  KeyChecker keys(cfg, "analysis");
  keys.allow("p");
  keys.allow("k");
  keys.allow("max_iters");
  keys.allow("tol");
  keys.finish();
  std::vector<double> p_grid =
      cfg.get_list("analysis", "p", {1.2, 1.5, 1.8, 2.0, 2.5});
  std::vector<double> k_list = cfg.get_list("analysis", "k", {256, 1024, 4096});
  std::vector<int> k_grid;
  for (double kd : k_list) k_grid.push_back(static_cast<int>(kd));
  int max_iters = geti(cfg, "max_iters", 20000, 1, 1 << 30);
  double tol = cfg.get_double("analysis", "tol", 1e-10);

  LpReport rep = lp_regularity_check(map, p_grid, k_grid, max_iters, tol);

  AnalysisOutput out;
  out.resolved = {{"p", list_json(p_grid)},
                  {"k", list_json(k_list)},
                  {"max_iters", max_iters},
                  {"tol", tol}};

  double largest_bounded = 0.0;
  double smallest_unbounded = 0.0;
  nlohmann::json verdicts = nlohmann::json::array();
  for (const LpVerdict& v : rep.verdicts) {
    verdicts.push_back({{"p", v.p},
                        {"bounded", v.bounded},
                        {"max_power_ratio", v.max_power_ratio}});
    if (v.bounded) {
      largest_bounded = std::max(largest_bounded, v.p);
    } else if (smallest_unbounded == 0.0 || v.p < smallest_unbounded) {
      smallest_unbounded = v.p;
    }
  }
  out.body = {{"threshold_p", rep.threshold_p == std::numeric_limits<double>::infinity()
                                  ? nlohmann::json("inf")
                                  : nlohmann::json(rep.threshold_p)},
              {"verdicts", verdicts}};

  std::ostringstream v;
  if (smallest_unbounded == 0.0) {
    v << "bounded-for-all-p";
  } else if (largest_bounded == 0.0) {
    v << "unbounded-for-all-p";
  } else {
    v << "bounded<=" << fmt3(largest_bounded) << ",unbounded>="
      << fmt3(smallest_unbounded);
  }
  out.verdict = v.str();

  std::ostringstream csv;
  csv << "p,k,norm\n";
  for (const LpCell& cell : rep.cells) {
    csv << g17(cell.p) << ',' << cell.bins << ',' << g17(cell.norm) << '\n';
  }
  out.csvs.push_back({"lp.csv", csv.str()});

  out.summary_lines.push_back("empirical boundedness frontier: " + out.verdict);
  out.summary_lines.push_back(
      "theoretical threshold l_max/(l_max-1) = " +
      (rep.threshold_p == std::numeric_limits<double>::infinity()
           ? std::string("inf")
           : fmt3(rep.threshold_p)));
  return out;
}

AnalysisOutput run_bbc(const ConfigFile& cfg, const MapSpec& map,
                       std::uint64_t seed) {
  KeyChecker keys(cfg, "analysis");
  keys.allow("deltas");
  keys.allow("samples");
  keys.allow("horizon");
  keys.finish();
  std::vector<double> deltas =
      cfg.get_list("analysis", "deltas", {1e-1, 1e-2, 1e-3});
  int samples = geti(cfg, "samples", 10000, 1000, 1 << 30);
  int horizon = geti(cfg, "horizon", 1000, 100, 1 << 30);

  BBCReport rep = bbc_scan(map, deltas, samples, horizon, seed);

  AnalysisOutput out;
  out.resolved = {{"deltas", list_json(deltas)},
                  {"samples", samples},
                  {"horizon", horizon}};
  out.verdict = verdict_name(rep.verdict);
  nlohmann::json per_delta = nlohmann::json::array();
  for (const FirstEntryStats& st : rep.per_delta) {
    nlohmann::json pieces = nlohmann::json::array();
    for (const Interval& part : n_delta(map, st.delta).parts()) {
      pieces.push_back({static_cast<double>(part.lo),
                        static_cast<double>(part.hi)});
    }
    per_delta.push_back({{"delta", st.delta},
                         {"min_first_entry_deriv", st.min_first_entry_deriv},
                         {"argmin_x", st.argmin_x},
                         {"entry_time", st.entry_time},
                         {"samples_used", st.samples_used},
                         {"never_entered", st.never_entered},
                         {"n_delta", pieces}});
  }
  out.body = {{"per_delta", per_delta}};

  std::ostringstream csv;
  csv << "delta,min_first_entry_deriv,entry_time,samples_used,never_entered\n";
  for (const FirstEntryStats& st : rep.per_delta) {
    csv << g17(st.delta) << ',' << g17(st.min_first_entry_deriv) << ','
        << st.entry_time << ',' << st.samples_used << ',' << st.never_entered
        << '\n';
  }
  out.csvs.push_back({"bbc.csv", csv.str()});

  for (const FirstEntryStats& st : rep.per_delta) {
    out.summary_lines.push_back(
        "delta = " + fmt3(st.delta) + ": min |Df^n| at first entry = " +
        fmt3(st.min_first_entry_deriv) + " (" +
        std::to_string(st.samples_used) + " samples entered, " +
        std::to_string(st.never_entered) + " never did)");
  }
  return out;
}

AnalysisOutput run_wander(const ConfigFile& cfg, const MapSpec& map,
                          std::uint64_t seed) {
  KeyChecker keys(cfg, "analysis");
  keys.allow("lo");
  keys.allow("hi");
  keys.allow("intervals");
  keys.allow("len_min");
  keys.allow("len_max");
  keys.allow("n");
  keys.finish();
  int n = geti(cfg, "n", 50, 1, 1 << 20);

  AnalysisOutput out;
  std::ostringstream csv;
  csv << "trial,lo,hi,outcome,step\n";
  nlohmann::json trials = nlohmann::json::array();

  auto record = [&](int trial, const WanderReport& rep) {
    int step = rep.outcome == WanderReport::Outcome::collision
                   ? rep.first_collision
                   : (rep.outcome == WanderReport::Outcome::straddle
                          ? rep.straddle_step
                          : rep.disjoint_count);
    csv << trial << ',' << g17(rep.start.lo) << ',' << g17(rep.start.hi) << ','
        << outcome_name(rep.outcome) << ',' << step << '\n';
    trials.push_back({{"lo", rep.start.lo},
                      {"hi", rep.start.hi},
                      {"outcome", outcome_name(rep.outcome)},
                      {"first_collision", rep.first_collision},
                      {"straddle_step", rep.straddle_step},
                      {"disjoint_count", rep.disjoint_count}});
    return rep.outcome == WanderReport::Outcome::disjoint;
  };

  if (cfg.has("analysis", "lo") || cfg.has("analysis", "hi")) {
    double lo = cfg.get_double("analysis", "lo");
    double hi = cfg.get_double("analysis", "hi");
    out.resolved = {{"lo", lo}, {"hi", hi}, {"n", n}};
    WanderReport rep = wandering_search(map, {lo, hi}, n);
    record(0, rep);
    out.verdict = outcome_name(rep.outcome);
    out.summary_lines.push_back(
        "J = (" + fmt3(lo) + ", " + fmt3(hi) + "): " + out.verdict +
        (rep.outcome == WanderReport::Outcome::disjoint
             ? " through " + std::to_string(rep.disjoint_count) + " iterates"
             : " at step " +
                   std::to_string(rep.outcome ==
                                          WanderReport::Outcome::collision
                                      ? rep.first_collision
                                      : rep.straddle_step)));
  } else {
    int count = geti(cfg, "intervals", 100, 1, 1 << 20);
    double len_min = cfg.get_double("analysis", "len_min", 1e-4);
    double len_max = cfg.get_double("analysis", "len_max", 1e-2);
    if (!(len_min > 0.0 && len_min <= len_max && len_max < 1.0)) {
      fail(ErrorCode::config_error,
           "[analysis] need 0 < len_min <= len_max < 1");
    }
    out.resolved = {{"intervals", count},
                    {"len_min", len_min},
                    {"len_max", len_max},
                    {"n", n}};
    std::mt19937_64 gen(seed);
    int disjoint_chains = 0;
    for (int t = 0; t < count; ++t) {
      double len =
          std::exp(std::log(len_min) +
                   uniform01(gen) * (std::log(len_max) - std::log(len_min)));
      double lo = uniform01(gen) * (1.0 - len);
      if (record(t, wandering_search(map, {lo, lo + len}, n))) {
        ++disjoint_chains;
      }
    }
    out.verdict =
        disjoint_chains == 0 ? "no-disjoint-chains" : "disjoint-chain-found";
    out.summary_lines.push_back(
        std::to_string(count) + " random intervals, " +
        std::to_string(disjoint_chains) +
        " survived all " + std::to_string(n) + " iterates disjoint");
  }
  out.body = {{"trials", trials}};
  out.summary_lines.push_back(
      "the search checks conditions (a) and (c) of the wandering-interval "
      "definition; basins of periodic attractors are not ruled out");
  out.csvs.push_back({"wander.csv", csv.str()});
  return out;
}

AnalysisOutput run_schwarzian(const ConfigFile& cfg, const MapSpec& map,
                              std::uint64_t /*seed*/) {
  KeyChecker keys(cfg, "analysis");
  keys.allow("samples");
  keys.finish();
  int samples = geti(cfg, "samples", 1000, 2, 1 << 24);

  SchwarzianReport rep = check_negative_schwarzian(map, samples);

  AnalysisOutput out;
  out.resolved = {{"samples", samples}};
  out.verdict = verdict_name(rep.verdict);
  nlohmann::json per_branch = nlohmann::json::array();
  std::ostringstream csv;
  csv << "branch,worst_value,worst_x\n";
  for (const SchwarzianBranchSample& s : rep.per_branch) {
    per_branch.push_back({{"branch", s.branch},
                          {"worst_value", s.worst_value},
                          {"worst_x", s.worst_x}});
    csv << s.branch << ',' << g17(s.worst_value) << ',' << g17(s.worst_x)
        << '\n';
  }
  out.body = {{"worst_value", rep.worst_value},
              {"worst_x", rep.worst_x},
              {"per_branch", per_branch}};
  out.csvs.push_back({"schwarzian.csv", csv.str()});
  out.summary_lines.push_back("worst sampled Sf = " + fmt3(rep.worst_value) +
                              " at x = " + fmt3(rep.worst_x));
  return out;
}

AnalysisOutput run_order(const ConfigFile& cfg, const MapSpec& map,
                         std::uint64_t /*seed*/) {
  KeyChecker keys(cfg, "analysis");
  keys.finish();

  AnalysisOutput out;
  out.resolved = nlohmann::json::object();
  std::ostringstream csv;
  csv << "critical_index,location,side,declared,estimated,fit_residual\n";
  nlohmann::json rows = nlohmann::json::array();
  double worst_gap = 0.0;
  int index = 0;
  for (const CriticalPoint& cp : map.critical_points()) {
    for (Side side : {Side::left, Side::right}) {
      OrderFit fit = estimate_critical_order(map, cp, side);
      double declared = cp.order(side);
      worst_gap = std::max(worst_gap, std::abs(fit.l_hat - declared));
      csv << index << ',' << g17(cp.location) << ',' << side_name(side) << ','
          << g17(declared) << ',' << g17(fit.l_hat) << ','
          << g17(fit.fit_residual) << '\n';
      rows.push_back({{"critical_index", index},
                      {"location", cp.location},
                      {"side", side_name(side)},
                      {"declared", declared},
                      {"estimated", fit.l_hat},
                      {"fit_residual", fit.fit_residual},
                      {"points_used", fit.points_used}});
    }
    ++index;
  }
  out.body = {{"estimates", rows}, {"worst_gap", worst_gap}};
  out.verdict = worst_gap <= 0.05 ? "consistent" : "mismatch";
  out.csvs.push_back({"order.csv", csv.str()});
  out.summary_lines.push_back(
      "max |estimated - declared| over all one-sided orders: " +
      fmt3(worst_gap));
  return out;
}

std::string provenance_comment(const nlohmann::json& resolved,
                               std::uint64_t seed) {
  std::ostringstream os;
  os << "# intervalkit " << kVersion << '\n';
  os << "# schema_version = " << kReportSchemaVersion << '\n';
  os << "# seed = " << seed << '\n';
  for (auto it = resolved.begin(); it != resolved.end(); ++it) {
    const nlohmann::json& section = it.value();
    for (auto kv = section.begin(); kv != section.end(); ++kv) {
      os << "# " << it.key() << '.' << kv.key() << " = ";
      if (kv.value().is_string()) {
        os << kv.value().get<std::string>();
      } else {
        os << kv.value().dump();
      }
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace

ExperimentResult run_experiment(const std::string& config_text,
                                std::optional<std::uint64_t> seed_override) {
  ConfigFile cfg = ConfigFile::parse(config_text);
  for (const std::string& section : cfg.sections()) {
    if (section != "map" && section != "analysis" && section != "output") {
      fail(ErrorCode::config_error, "unknown section [" + section + "]");
    }
  }
  if (!cfg.has_section("analysis")) {
    fail(ErrorCode::config_error, "config needs an [analysis] section");
  }

  MapSpec map = map_from_config(cfg);
  std::string analysis = cfg.get("analysis", "name");
  std::uint64_t seed = cfg.get_u64("analysis", "seed", 1);
  if (seed_override) seed = *seed_override;

  std::string dir = cfg.get("output", "dir", "out");
  std::string formats = cfg.get("output", "formats", "both");
  if (formats != "csv" && formats != "json" && formats != "both") {
    fail(ErrorCode::config_error,
         "[output] formats must be csv, json or both");
  }
  for (const std::string& key : cfg.keys("output")) {
    if (key != "dir" && key != "formats") {
      fail(ErrorCode::config_error, "unknown key '" + key + "' in [output]");
    }
  }

  AnalysisOutput body;
  if (analysis == "orbit") {
    body = run_orbit(cfg, map, seed);
  } else if (analysis == "summability") {
    body = run_summability(cfg, map, seed);
  } else if (analysis == "prop1") {
    body = run_prop1(cfg, map, seed);
  } else if (analysis == "prop2") {
    body = run_prop2(cfg, map, seed);
  } else if (analysis == "density") {
    body = run_density(cfg, map, seed);
  } else if (analysis == "lp") {
    body = run_lp(cfg, map, seed);
  } else if (analysis == "bbc") {
    body = run_bbc(cfg, map, seed);
  } else if (analysis == "wander") {
    body = run_wander(cfg, map, seed);
  } else if (analysis == "schwarzian") {
    body = run_schwarzian(cfg, map, seed);
  } else if (analysis == "order") {
    body = run_order(cfg, map, seed);
  } else {
    fail(ErrorCode::config_error, "unknown analysis '" + analysis + "'");
  }

  nlohmann::json resolved;
  nlohmann::json map_section;
  map_section["family"] = map.name();
  for (const auto& [key, value] : map.params()) map_section[key] = value;
  resolved["map"] = map_section;
  body.resolved["name"] = analysis;
  body.resolved["seed"] = seed;
  resolved["analysis"] = body.resolved;
  resolved["output"] = {{"dir", dir}, {"formats", formats}};

  ExperimentResult result;
  result.analysis = analysis;
  result.verdict = body.verdict;
  result.output_dir = dir;
  result.formats = formats;

  result.report = body.body;
  result.report["analysis"] = analysis;
  result.report["verdict"] = body.verdict;
  result.report["map"] = map.to_json();
  result.report["provenance"] = {{"tool", "intervalkit"},
                                 {"version", kVersion},
                                 {"schema_version", kReportSchemaVersion},
                                 {"seed", seed},
                                 {"config", resolved}};

  std::string comment = provenance_comment(resolved, seed);
  for (CsvFile& file : body.csvs) {
    result.csv_files.push_back({file.name, comment + file.data});
  }

  std::ostringstream summary;
  summary << "intervalkit " << kVersion << " | analysis: " << analysis
          << " | map: " << map.name();
  if (!map.params().empty()) {
    summary << " (";
    bool first = true;
    for (const auto& [key, value] : map.params()) {
      if (!first) summary << ", ";
      summary << key << "=" << fmt3(value);
      first = false;
    }
    summary << ")";
  }
  summary << '\n';
  for (const std::string& line : body.summary_lines) {
    summary << "  " << line << '\n';
  }
  summary << "verdict: " << body.verdict << '\n';
  result.summary = summary.str();
  return result;
}

}  // namespace intervalkit
