#pragma once

#include <string>
#include <vector>

#include "ergolab/config.hpp"

namespace ergolab {

inline constexpr const char* kErgolabVersion = "0.1.0";

// Everything a run produces. All files except run_log.txt are byte-for-byte
// reproducible from (config, seed, version); run_log.txt carries the wall
// clock and is outside that contract.
struct ReportBundle {
  std::string config_echo;
  std::string summary_json;               // also written to summary.json
  std::vector<std::string> files_written; // paths relative to output_dir
  std::vector<std::string> expect_mismatches;
  double wall_seconds = 0.0;
  std::string version = kErgolabVersion;

  bool ok() const { return expect_mismatches.empty(); }
};

ReportBundle run_experiment(const ExperimentConfig& config);

}  // namespace ergolab
