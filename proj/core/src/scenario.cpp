#include "orchid/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "orchid/errors.hpp"

namespace orchid {
namespace {

using nlohmann::json;

constexpr int kMaxResampleAttempts = 1000000;

bool inside_area(const Vec2& p, double side) {
  return p.x >= 0.0 && p.x <= side && p.y >= 0.0 && p.y <= side;
}

}  // namespace

std::vector<Vec2> Scenario::uav_user_positions() const {
  std::vector<Vec2> out;
  out.reserve(uav_users.size());
  for (int idx : uav_users) out.push_back(users[static_cast<std::size_t>(idx)]);
  return out;
}

std::vector<Vec2> Scenario::gbs_user_positions() const {
  std::vector<Vec2> out;
  out.reserve(gbs_users.size());
  for (int idx : gbs_users) out.push_back(users[static_cast<std::size_t>(idx)]);
  return out;
}

Scenario generate_scenario(const WorldConfig& config) {
  config.validate();

  std::mt19937_64 rng(config.seed);
  const double side = config.area_side_m;
  const double margin = std::min(2.0 * config.scatter_sigma_m, side / 2.0);
  std::uniform_real_distribution<double> center_coord(margin, side - margin);
  std::normal_distribution<double> scatter(0.0, config.scatter_sigma_m);

  Scenario s;
  s.config = config;
  s.centers.reserve(static_cast<std::size_t>(config.num_clusters));
  for (int k = 0; k < config.num_clusters; ++k) {
    const double x = center_coord(rng);
    const double y = center_coord(rng);
    s.centers.push_back({x, y});
  }

  const int base = config.num_users / config.num_clusters;
  const int extra = config.num_users % config.num_clusters;
  s.users.reserve(static_cast<std::size_t>(config.num_users));
  s.labels.reserve(static_cast<std::size_t>(config.num_users));
  for (int k = 0; k < config.num_clusters; ++k) {
    const int count = base + (k < extra ? 1 : 0);
    const Vec2 c = s.centers[static_cast<std::size_t>(k)];
    for (int i = 0; i < count; ++i) {
      Vec2 p;
      int attempts = 0;
      do {
        if (++attempts > kMaxResampleAttempts) {
          throw ConfigError("scatter_sigma_m too large for the area: cannot place users");
        }
        const double dx = scatter(rng);
        const double dy = scatter(rng);
        p = {c.x + dx, c.y + dy};
      } while (!inside_area(p, side));
      s.users.push_back(p);
      s.labels.push_back(k);
    }
  }

  auto partition = partition_users(s.users, s.labels, s.centers, config.gbs_position);
  s.gbs_users = std::move(partition.gbs_users);
  s.uav_users = std::move(partition.uav_users);
  return s;
}

UserPartition partition_users(const std::vector<Vec2>& users, const std::vector<int>& labels,
                              const std::vector<Vec2>& centers, const Vec3& gbs_position) {
  if (centers.empty()) throw std::invalid_argument("partition_users: no cluster centers");
  if (labels.size() != users.size()) {
    throw std::invalid_argument("partition_users: labels and users differ in length");
  }
  const Vec2 gbs = gbs_position.horizontal();
  UserPartition out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double d = distance(centers[k], gbs);
    if (d < best) {
      best = d;
      out.gbs_cluster = static_cast<int>(k);
    }
  }
  for (std::size_t m = 0; m < users.size(); ++m) {
    if (labels[m] == out.gbs_cluster) {
      out.gbs_users.push_back(static_cast<int>(m));
    } else {
      out.uav_users.push_back(static_cast<int>(m));
    }
  }
  return out;
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["version"] = kScenarioFormatVersion;
  j["seed"] = s.config.seed;
  j["config"] = s.config;
  j["users"] = s.users;
  j["labels"] = s.labels;
  j["centers"] = s.centers;
  j["gbs_users"] = s.gbs_users;
  j["uav_users"] = s.uav_users;
  return j;
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  try {
    const int version = j.at("version").get<int>();
    if (version != kScenarioFormatVersion) {
      throw ConfigError("unsupported scenario version " + std::to_string(version));
    }
    from_json(j.at("config"), s.config);
    s.config.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& p : j.at("users")) s.users.push_back(p.get<Vec2>());
    s.labels = j.at("labels").get<std::vector<int>>();
    for (const auto& p : j.at("centers")) s.centers.push_back(p.get<Vec2>());
    s.gbs_users = j.at("gbs_users").get<std::vector<int>>();
    s.uav_users = j.at("uav_users").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }

  s.config.validate();
  if (s.labels.size() != s.users.size()) throw ConfigError("scenario labels/users mismatch");
  for (const auto& p : s.users) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !inside_area(p, s.config.area_side_m)) {
      throw ConfigError("scenario user outside the service area");
    }
  }
  std::vector<int> seen(s.users.size(), 0);
  for (int idx : s.gbs_users) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= s.users.size()) {
      throw ConfigError("scenario gbs_users index out of range");
    }
    ++seen[static_cast<std::size_t>(idx)];
  }
  for (int idx : s.uav_users) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= s.users.size()) {
      throw ConfigError("scenario uav_users index out of range");
    }
    ++seen[static_cast<std::size_t>(idx)];
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
    throw ConfigError("scenario partition must cover every user exactly once");
  }
  if (s.uav_users.empty()) throw ConfigError("scenario has no UAV-tier users");
  return s;
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write scenario file '" + path + "'");
  out << scenario_to_json(scenario).dump(2) << '\n';
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse scenario '" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

std::string scenario_fingerprint(const Scenario& scenario) {
  const std::string text = scenario_to_json(scenario).dump();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace orchid
