#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace intervalkit {

struct CsvFile {
  std::string name;  // e.g. "density.csv"
  std::string data;  // provenance comment block + header + rows
};

struct ExperimentResult {
  std::string analysis;
  std::string verdict;
  std::string summary;  // one-screen human-readable text
  nlohmann::json report;
  std::vector<CsvFile> csv_files;
  std::string output_dir;  // resolved [output] dir
  std::string formats;     // csv | json | both
};

/// Parses an experiment config, runs the named analysis and assembles the
/// report. Every output embeds the resolved config, seed and tool version;
/// identical config + seed produce byte-identical report text. Verdicts are
/// data, not errors: failures to execute raise, verdicts never do.
ExperimentResult run_experiment(const std::string& config_text,
                                std::optional<std::uint64_t> seed_override =
                                    std::nullopt);

}  // namespace intervalkit
