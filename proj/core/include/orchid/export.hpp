#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orchid/config.hpp"

namespace orchid {

using TriggerList = std::vector<std::pair<std::uint64_t, std::optional<int>>>;

struct RunManifest {
  std::string method;
  std::string scenario_fingerprint;
  int log_schema_version = 0;
  TriggerList trigger_episodes;
};

// <dir>/manifest.json describing a run directory next to its log.csv.
void write_run_manifest(const std::string& dir, const std::string& method,
                        const RunConfig& config, const std::string& scenario_fingerprint,
                        const TriggerList& trigger_episodes);
std::optional<RunManifest> read_run_manifest(const std::string& dir);

struct ExportSummary {
  int runs = 0;
  std::size_t tidy_rows = 0;
  std::vector<std::string> methods;
};

// Scans <runs_dir> and its immediate subdirectories for run directories and
// writes, under <out_dir>:
//   tidy_runs.csv        method,seed,episode,metric,value
//   summary_last100.csv  method,seed,metric,mean,std,episodes
//   rnf_events.csv       method,seed,trigger_episode
// Throws std::runtime_error when two runs would emit the same
// (method, seed, episode, metric) key.
ExportSummary export_figures(const std::string& runs_dir, const std::string& out_dir);

}  // namespace orchid
