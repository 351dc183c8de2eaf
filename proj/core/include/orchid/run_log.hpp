#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace orchid {

inline constexpr int kRunLogSchemaVersion = 1;

struct LogRow {
  std::uint64_t seed = 0;
  int episode = 0;
  double total_reward = 0.0;
  double nee = 0.0;
  double jfi_load = 0.0;
  double jfi_rate = 0.0;
  double coverage_pct = 0.0;
  double eta_actor = 0.0;
  double eta_critic = 0.0;
  bool rnf_triggered = false;  // latched: 1 from the trigger episode onward
};

const std::vector<std::string>& run_log_columns();

// Metric columns in schema order, excluding seed and episode.
std::vector<std::pair<std::string, double>> metric_values(const LogRow& row);

void write_run_log_header(std::ostream& out);
void write_run_log_row(std::ostream& out, const LogRow& row);
void write_run_log(const std::string& path, const std::vector<LogRow>& rows);

// Throws std::runtime_error on a header that does not match the schema or a
// malformed row.
std::vector<LogRow> read_run_log(const std::string& path);

}  // namespace orchid
