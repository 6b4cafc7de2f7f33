// intervalkit command-line driver. Talks to the engine exclusively through
// the public C API; file placement, formats and suite aggregation live here.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "intervalkit.h"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::optional<std::string> out;
  std::optional<unsigned long long> seed;
  std::optional<std::string> format;
  int workers = 0;  // 0 = pick automatically
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// temp file + rename, so readers never observe a partial file
void atomic_write(const fs::path& path, const std::string& data) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << data;
  }
  fs::rename(tmp, path);
}

struct RunOutcome {
  fs::path config;
  bool ok = false;
  std::string analysis;
  std::string verdict;
  std::string error;
  std::vector<std::string> files;
};

RunOutcome run_config(const fs::path& config_path, const Options& opts,
                      const std::optional<fs::path>& out_override,
                      bool print_summary) {
  RunOutcome outcome;
  outcome.config = config_path;

  std::string text;
  try {
    text = read_file(config_path);
  } catch (const std::exception& e) {
    outcome.error = e.what();
    return outcome;
  }

  ik_result* result = nullptr;
  const unsigned long long* seed_ptr = opts.seed ? &*opts.seed : nullptr;
  ik_status status = ik_run(text.c_str(), seed_ptr, &result);
  if (status != IK_OK) {
    outcome.error = std::string(ik_status_name(status)) + ": " + ik_last_error();
    return outcome;
  }

  outcome.analysis = ik_result_analysis(result);
  outcome.verdict = ik_result_verdict(result);

  fs::path dir = out_override ? *out_override
                              : (opts.out ? fs::path(*opts.out)
                                          : fs::path(ik_result_output_dir(result)));
  std::string formats = opts.format ? *opts.format : ik_result_formats(result);

  try {
    if (formats == "json" || formats == "both") {
      fs::path path = dir / (outcome.analysis + ".json");
      atomic_write(path, ik_result_json(result));
      outcome.files.push_back(path.string());
    }
    if (formats == "csv" || formats == "both") {
      int n = ik_result_csv_count(result);
      for (int i = 0; i < n; ++i) {
        fs::path path = dir / ik_result_csv_name(result, i);
        atomic_write(path, ik_result_csv_data(result, i));
        outcome.files.push_back(path.string());
      }
    }
  } catch (const std::exception& e) {
    outcome.error = e.what();
    ik_result_free(result);
    return outcome;
  }

  if (print_summary) {
    std::cout << ik_result_summary(result);
    for (const std::string& file : outcome.files) {
      std::cout << "wrote " << file << '\n';
    }
  }
  ik_result_free(result);
  outcome.ok = true;
  return outcome;
}

int cmd_run(const std::string& config, const Options& opts) {
  RunOutcome outcome = run_config(config, opts, std::nullopt, true);
  if (!outcome.ok) {
    std::cerr << "error: " << config << ": " << outcome.error << '\n';
    return 1;
  }
  return 0;
}

int cmd_suite(const std::string& dir, const Options& opts) {
  std::vector<fs::path> configs;
  if (fs::exists(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      auto ext = entry.path().extension();
      if (ext == ".cfg" || ext == ".ini") configs.push_back(entry.path());
    }
  } else {
    std::cerr << "error: no such directory: " << dir << '\n';
    return 1;
  }
  std::sort(configs.begin(), configs.end());

  fs::path out_root = opts.out ? fs::path(*opts.out) : fs::path("out");
  std::vector<RunOutcome> outcomes(configs.size());

  int workers = opts.workers > 0
                    ? opts.workers
                    : static_cast<int>(
                          std::min(4u, std::max(1u, std::thread::hardware_concurrency())));
  workers = std::min<int>(workers, std::max<std::size_t>(configs.size(), 1));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < configs.size();
         i = next.fetch_add(1)) {
      fs::path sub = out_root / configs[i].stem();
      outcomes[i] = run_config(configs[i], opts, sub, false);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  nlohmann::json rows = nlohmann::json::array();
  std::size_t failures = 0;
  std::printf("%-32s %-14s %-28s %s\n", "config", "analysis", "verdict",
              "status");
  for (const RunOutcome& o : outcomes) {
    std::string name = o.config.filename().string();
    if (o.ok) {
      std::printf("%-32s %-14s %-28s ok\n", name.c_str(), o.analysis.c_str(),
                  o.verdict.c_str());
    } else {
      ++failures;
      std::printf("%-32s %-14s %-28s error: %s\n", name.c_str(),
                  o.analysis.empty() ? "-" : o.analysis.c_str(), "-",
                  o.error.c_str());
    }
    rows.push_back({{"config", name},
                    {"analysis", o.analysis},
                    {"verdict", o.verdict},
                    {"ok", o.ok},
                    {"error", o.error},
                    {"files", o.files}});
  }

  nlohmann::json aggregate = {{"tool", "intervalkit"},
                              {"version", ik_version()},
                              {"configs", rows},
                              {"failures", failures}};
  fs::path report_path = out_root / "suite_report.json";
  try {
    atomic_write(report_path, aggregate.dump(2) + "\n");
    std::cout << "wrote " << report_path.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical experiments on piecewise C1 interval maps"};
  app.set_version_flag("--version", ik_version());

  Options opts;
  app.add_option("--out", opts.out, "output directory (overrides [output] dir)");
  app.add_option("--seed", opts.seed, "seed override for seeded analyses");
  app.add_option("--workers", opts.workers, "worker cap for suite runs");
  app.add_option("--format", opts.format, "output formats: csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));

  std::string run_config_path;
  auto* run = app.add_subcommand("run", "run one experiment config");
  run->fallthrough();
  run->add_option("config", run_config_path, "experiment config file")
      ->required();

  std::string suite_dir;
  auto* suite = app.add_subcommand("suite", "run every config in a directory");
  suite->fallthrough();
  suite->add_option("dir", suite_dir, "directory of .cfg/.ini configs")
      ->required();

  app.require_subcommand(1);
  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(run_config_path, opts);
  return cmd_suite(suite_dir, opts);
}
