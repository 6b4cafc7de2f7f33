#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "intervalkit/config.hpp"
#include "intervalkit/errors.hpp"
#include "intervalkit/experiment.hpp"

using namespace intervalkit;

namespace {

std::string config_error_message(const std::string& text) {
  try {
    run_experiment(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config_error);
    return e.what();
  }
  FAIL("expected a ConfigError");
  return "";
}

}  // namespace

TEST_CASE("config parsing: sections, comments, trimming") {
  ConfigFile cfg = ConfigFile::parse(
      "# leading comment\n"
      "[map]\n"
      "family = logistic\n"
      "mu = 3.7   \n"
      "; another comment\n"
      "[analysis]\n"
      "name=orbit\n");
  CHECK(cfg.sections().size() == 2);
  CHECK(cfg.get("map", "family") == "logistic");
  CHECK(cfg.get_double("map", "mu") == doctest::Approx(3.7));
  CHECK(cfg.get("analysis", "name") == "orbit");
  CHECK(cfg.get("analysis", "missing", "fallback") == "fallback");
  CHECK(!cfg.has("map", "slope"));
}

TEST_CASE("config parsing failures name the offending construct") {
  CHECK_THROWS_AS(ConfigFile::parse("key = 1\n"), Error);        // outside section
  CHECK_THROWS_AS(ConfigFile::parse("[map\n"), Error);           // bad header
  CHECK_THROWS_AS(ConfigFile::parse("[map]\njust-a-line\n"), Error);
  CHECK_THROWS_AS(ConfigFile::parse("[map]\na = 1\na = 2\n"), Error);
  ConfigFile cfg = ConfigFile::parse("[map]\nfamily = logistic\nmu = abc\n");
  CHECK_THROWS_AS(cfg.get_double("map", "mu"), Error);
}

TEST_CASE("map_from_config builds the named family") {
  ConfigFile cfg = ConfigFile::parse("[map]\nfamily = tent\nslope = 1.5\n");
  MapSpec m = map_from_config(cfg);
  CHECK(m.name() == "tent");
  CHECK(m.params().at("slope") == 1.5);
  CHECK(m.eval(0.5, Side::left) == doctest::Approx(0.75));

  ConfigFile bad = ConfigFile::parse("[map]\nfamily = unknown_family\n");
  CHECK_THROWS_AS(map_from_config(bad), Error);
}

TEST_CASE("run_experiment: summability on the doubling map") {
  ExperimentResult r = run_experiment(
      "[map]\nfamily = doubling\n"
      "[analysis]\nname = summability\nn = 100\n");
  CHECK(r.analysis == "summability");
  CHECK(r.verdict == "converges");
  CHECK(r.summary.find("converges") != std::string::npos);
  CHECK(r.report["series2"]["sum"].get<double>() == doctest::Approx(1.0));
  CHECK(r.report["provenance"]["schema_version"] == 1);
  CHECK(r.report["provenance"]["config"]["analysis"]["n"] == 100);
  CHECK(r.report["map"]["name"] == "doubling");
  REQUIRE(r.csv_files.size() == 2);
  CHECK(r.csv_files[0].name == "series1.csv");
  CHECK(r.csv_files[0].data.rfind("# intervalkit", 0) == 0);
  CHECK(r.csv_files[0].data.find("map.family = doubling") != std::string::npos);
  CHECK(r.csv_files[0].data.find("n,term,partial_sum") != std::string::npos);
  CHECK(r.output_dir == "out");
  CHECK(r.formats == "both");
}

TEST_CASE("unknown sections, keys, analyses and values are rejected by name") {
  CHECK(config_error_message("[map]\nfamily = doubling\n"
                             "[analysis]\nname = orbit\n"
                             "[junk]\nx = 1\n")
            .find("junk") != std::string::npos);
  CHECK(config_error_message("[map]\nfamily = doubling\n"
                             "[analysis]\nname = orbit\nbogus = 3\n")
            .find("bogus") != std::string::npos);
  CHECK(config_error_message("[map]\nfamily = doubling\n"
                             "[analysis]\nname = frobnicate\n")
            .find("frobnicate") != std::string::npos);
  CHECK(config_error_message("[map]\nfamily = doubling\n"
                             "[analysis]\nname = orbit\n"
                             "[output]\nformats = yaml\n")
            .find("formats") != std::string::npos);
  CHECK(config_error_message("[analysis]\nname = orbit\n")
            .find("[map]") != std::string::npos);
}

TEST_CASE("execution errors carry non-config codes") {
  try {
    run_experiment("[map]\nfamily = logistic\nmu = 9\n"
                   "[analysis]\nname = orbit\n");
    FAIL("expected InvalidParams");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_params);
  }
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  const std::string cfg =
      "[map]\nfamily = logistic\n"
      "[analysis]\nname = bbc\nseed = 7\ndeltas = 1e-1,1e-2,1e-3\n"
      "samples = 1000\nhorizon = 100\n";
  ExperimentResult a = run_experiment(cfg);
  ExperimentResult b = run_experiment(cfg);
  CHECK(a.report.dump() == b.report.dump());
  REQUIRE(a.csv_files.size() == b.csv_files.size());
  for (std::size_t i = 0; i < a.csv_files.size(); ++i) {
    CHECK(a.csv_files[i].data == b.csv_files[i].data);
  }
  // the seed override reroutes the sampling
  ExperimentResult c = run_experiment(cfg, 8);
  CHECK(c.report["provenance"]["seed"] == 8);
  CHECK(a.report["provenance"]["seed"] == 7);
}

TEST_CASE("prop2 runs are seeded and deterministic") {
  const std::string cfg =
      "[map]\nfamily = doubling\n"
      "[analysis]\nname = prop2\nn = 4\ntrials = 10\n"
      "sizes = 1e-2,1e-3\nseed = 3\n";
  ExperimentResult a = run_experiment(cfg);
  ExperimentResult b = run_experiment(cfg);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(a.verdict == "consistent");
}

TEST_CASE("density analysis reports the oracle distance when known") {
  ExperimentResult r = run_experiment(
      "[map]\nfamily = logistic\n"
      "[analysis]\nname = density\nk = 256\n");
  CHECK(r.verdict == "converged");
  CHECK(r.report["l1_distance_to_reference"].get<double>() < 0.1);
  CHECK(r.report["invariance_residual"].get<double>() < 0.05);
  REQUIRE(r.csv_files.size() == 1);
  CHECK(r.csv_files[0].name == "density.csv");
  CHECK(r.csv_files[0].data.find("midpoint,value") != std::string::npos);
}

TEST_CASE("density analysis can probe extra starting points") {
  ExperimentResult r = run_experiment(
      "[map]\nfamily = doubling\n"
      "[analysis]\nname = density\nk = 64\nrestarts = 2\n");
  CHECK(r.report["fixed_point_spread"].get<double>() < 1e-8);
}

TEST_CASE("operator export is optional") {
  ExperimentResult r = run_experiment(
      "[map]\nfamily = doubling\n"
      "[analysis]\nname = density\nk = 16\nexport_operator = 1\n");
  REQUIRE(r.csv_files.size() == 2);
  CHECK(r.csv_files[1].name == "operator.txt");
}

TEST_CASE("wander analysis: explicit interval and random mode") {
  ExperimentResult one = run_experiment(
      "[map]\nfamily = doubling\n"
      "[analysis]\nname = wander\nlo = 0.2\nhi = 0.3\nn = 50\n");
  CHECK(one.verdict == "straddle");

  ExperimentResult many = run_experiment(
      "[map]\nfamily = logistic\n"
      "[analysis]\nname = wander\nintervals = 20\nn = 50\nseed = 2\n");
  CHECK(many.verdict == "no-disjoint-chains");
  CHECK(many.report["trials"].size() == 20);
}

TEST_CASE("schwarzian and order analyses emit verdicts") {
  CHECK(run_experiment("[map]\nfamily = logistic\n"
                       "[analysis]\nname = schwarzian\n")
            .verdict == "holds");
  CHECK(run_experiment("[map]\nfamily = doubling\n"
                       "[analysis]\nname = schwarzian\n")
            .verdict == "boundary");
  CHECK(run_experiment("[map]\nfamily = lorenz_power\n"
                       "[analysis]\nname = order\n")
            .verdict == "consistent");
}

TEST_CASE("prop1 analysis emits grid CSV") {
  ExperimentResult r = run_experiment(
      "[map]\nfamily = doubling\n"
      "[analysis]\nname = prop1\nn = 6\neps = 1e-2,1e-3\n");
  CHECK(r.verdict == "bounded");
  CHECK(r.csv_files[0].name == "prop1.csv");
  CHECK(r.csv_files[0].data.find("n,eps,measure,ratio") != std::string::npos);
}

TEST_CASE("orbit analysis reports hit-critical maps") {
  ExperimentResult r = run_experiment(
      "[map]\nfamily = lorenz_affine\nf0 = 0.1\nfc_left = 0.5\n"
      "fc_right = 0.2\nf1 = 0.9\n"
      "[analysis]\nname = orbit\nside = left\nn = 10\n");
  CHECK(r.verdict == "hit-critical");
  CHECK(r.report["hit_step"] == 1);
}
