#include "orchid/run_log.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace orchid {

const std::vector<std::string>& run_log_columns() {
  static const std::vector<std::string> columns{
      "seed",         "episode",   "total_reward", "nee",        "jfi_load",
      "jfi_rate",     "coverage_pct", "eta_actor", "eta_critic", "rnf_triggered"};
  return columns;
}

std::vector<std::pair<std::string, double>> metric_values(const LogRow& row) {
  return {{"total_reward", row.total_reward}, {"nee", row.nee},
          {"jfi_load", row.jfi_load},         {"jfi_rate", row.jfi_rate},
          {"coverage_pct", row.coverage_pct}, {"eta_actor", row.eta_actor},
          {"eta_critic", row.eta_critic},     {"rnf_triggered", row.rnf_triggered ? 1.0 : 0.0}};
}

void write_run_log_header(std::ostream& out) {
  const auto& cols = run_log_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

namespace {

// Shortest representation that parses back to the same double.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("run log: bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void write_run_log_row(std::ostream& out, const LogRow& row) {
  out << row.seed << ',' << row.episode;
  for (const auto& [name, value] : metric_values(row)) {
    if (name == "rnf_triggered") {
      out << ',' << (row.rnf_triggered ? 1 : 0);
    } else {
      out << ',' << format_double(value);
    }
  }
  out << '\n';
}

void write_run_log(const std::string& path, const std::vector<LogRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_run_log_header(out);
  for (const auto& r : rows) write_run_log_row(out, r);
}

std::vector<LogRow> read_run_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  std::ostringstream expected;
  write_run_log_header(expected);
  if (line + '\n' != expected.str()) throw std::runtime_error(path + ": unexpected header");

  std::vector<LogRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != run_log_columns().size()) throw std::runtime_error(path + ": malformed row");
    LogRow r;
    r.seed = std::stoull(f[0]);
    r.episode = std::stoi(f[1]);
    r.total_reward = parse_double(f[2]);
    r.nee = parse_double(f[3]);
    r.jfi_load = parse_double(f[4]);
    r.jfi_rate = parse_double(f[5]);
    r.coverage_pct = parse_double(f[6]);
    r.eta_actor = parse_double(f[7]);
    r.eta_critic = parse_double(f[8]);
    r.rnf_triggered = parse_double(f[9]) != 0.0;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace orchid
