#include "orchid/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <tuple>

#include "orchid/run_log.hpp"

namespace orchid {

namespace fs = std::filesystem;
using nlohmann::json;

void write_run_manifest(const std::string& dir, const std::string& method,
                        const RunConfig& config, const std::string& fingerprint,
                        const TriggerList& triggers) {
  json t = json::array();
  for (const auto& [seed, e] : triggers) {
    t.push_back({{"seed", seed}, {"trigger_episode", e ? json(*e) : json()}});
  }
  const json m{{"format", "orchid-run"},
               {"log_schema_version", kRunLogSchemaVersion},
               {"method", method},
               {"scenario_fingerprint", fingerprint},
               {"trigger_episodes", t},
               {"config", config}};
  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  out << m.dump(2) << '\n';
}

std::optional<RunManifest> read_run_manifest(const std::string& dir) {
  const fs::path path = fs::path(dir) / "manifest.json";
  if (!fs::exists(path)) return std::nullopt;
  std::ifstream in(path);
  const json j = json::parse(in);
  if (j.value("format", "") != "orchid-run") return std::nullopt;
  RunManifest m;
  m.method = j.at("method").get<std::string>();
  m.scenario_fingerprint = j.value("scenario_fingerprint", "");
  m.log_schema_version = j.at("log_schema_version").get<int>();
  for (const auto& t : j.at("trigger_episodes")) {
    const auto& e = t.at("trigger_episode");
    m.trigger_episodes.emplace_back(t.at("seed").get<std::uint64_t>(),
                                    e.is_null() ? std::nullopt : std::optional<int>(e.get<int>()));
  }
  return m;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool is_run_dir(const fs::path& p) {
  return fs::is_regular_file(p / "log.csv") && fs::is_regular_file(p / "manifest.json");
}

}  // namespace

ExportSummary export_figures(const std::string& runs_dir, const std::string& out_dir) {
  if (!fs::is_directory(runs_dir)) throw std::runtime_error(runs_dir + " is not a directory");
  std::vector<fs::path> dirs;
  if (is_run_dir(runs_dir)) dirs.emplace_back(runs_dir);
  for (const auto& entry : fs::directory_iterator(runs_dir)) {
    if (entry.is_directory() && is_run_dir(entry.path())) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw std::runtime_error("no run directories under " + runs_dir);

  fs::create_directories(out_dir);
  std::ofstream tidy(fs::path(out_dir) / "tidy_runs.csv");
  std::ofstream summary(fs::path(out_dir) / "summary_last100.csv");
  std::ofstream events(fs::path(out_dir) / "rnf_events.csv");
  if (!tidy || !summary || !events) throw std::runtime_error("cannot write exports in " + out_dir);
  tidy << "method,seed,episode,metric,value\n";
  summary << "method,seed,metric,mean,std,episodes\n";
  events << "method,seed,trigger_episode\n";

  ExportSummary result;
  std::set<std::tuple<std::string, std::uint64_t, int>> seen;
  std::set<std::string> methods;
  for (const auto& dir : dirs) {
    const auto manifest = read_run_manifest(dir.string());
    if (!manifest) continue;
    if (manifest->log_schema_version != kRunLogSchemaVersion) {
      throw std::runtime_error(dir.string() + ": unsupported log schema");
    }
    auto rows = read_run_log((dir / "log.csv").string());
    std::stable_sort(rows.begin(), rows.end(), [](const LogRow& a, const LogRow& b) {
      return std::tie(a.seed, a.episode) < std::tie(b.seed, b.episode);
    });
    const std::string& method = manifest->method;
    methods.insert(method);
    ++result.runs;

    std::map<std::uint64_t, std::vector<const LogRow*>> by_seed;
    for (const auto& r : rows) {
      if (!seen.emplace(method, r.seed, r.episode).second) {
        throw std::runtime_error("duplicate rows for method " + method + ", seed " +
                                 std::to_string(r.seed) + ", episode " +
                                 std::to_string(r.episode));
      }
      by_seed[r.seed].push_back(&r);
      for (const auto& [metric, value] : metric_values(r)) {
        tidy << method << ',' << r.seed << ',' << r.episode << ',' << metric << ',' << fmt(value)
             << '\n';
        ++result.tidy_rows;
      }
    }

    for (const auto& [seed, seed_rows] : by_seed) {
      const std::size_t n = std::min<std::size_t>(100, seed_rows.size());
      const auto tail = std::span(seed_rows).last(n);
      for (const auto& [metric, unused] : metric_values(*tail.front())) {
        double sum = 0.0;
        std::vector<double> v;
        for (const LogRow* r : tail) {
          for (const auto& [name, value] : metric_values(*r)) {
            if (name == metric) v.push_back(value);
          }
        }
        for (double x : v) sum += x;
        const double mean = sum / static_cast<double>(v.size());
        double sq = 0.0;
        for (double x : v) sq += (x - mean) * (x - mean);
        const double std = std::sqrt(sq / static_cast<double>(v.size()));
        summary << method << ',' << seed << ',' << metric << ',' << fmt(mean) << ',' << fmt(std)
                << ',' << n << '\n';
      }
    }
    for (const auto& [seed, e] : manifest->trigger_episodes) {
      events << method << ',' << seed << ',' << (e ? std::to_string(*e) : "") << '\n';
    }
  }
  result.methods.assign(methods.begin(), methods.end());
  return result;
}

}  // namespace orchid
