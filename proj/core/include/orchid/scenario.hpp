#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "orchid/config.hpp"
#include "orchid/geometry.hpp"

namespace orchid {

inline constexpr int kScenarioFormatVersion = 1;

// Immutable world instance: clustered users, hotspot centers and the split
// of users between the terrestrial tier and the UAV tier.
struct Scenario {
  WorldConfig config;
  std::vector<Vec2> users;
  std::vector<int> labels;  // hotspot index of each user
  std::vector<Vec2> centers;
  std::vector<int> gbs_users;
  std::vector<int> uav_users;

  std::uint64_t seed() const { return config.seed; }
  std::vector<Vec2> uav_user_positions() const;
  std::vector<Vec2> gbs_user_positions() const;
};

struct UserPartition {
  std::vector<int> gbs_users;
  std::vector<int> uav_users;
  int gbs_cluster = 0;
};

// Thomas-cluster style generation with a fixed hotspot count and near-equal
// hotspot sizes. Deterministic for a fixed config.seed.
Scenario generate_scenario(const WorldConfig& config);

// All members of the hotspot whose center is horizontally nearest to the
// GBS go to the terrestrial tier; ties resolve to the lowest hotspot index.
UserPartition partition_users(const std::vector<Vec2>& users, const std::vector<int>& labels,
                              const std::vector<Vec2>& centers, const Vec3& gbs_position);

nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);
void save_scenario(const Scenario& scenario, const std::string& path);
Scenario load_scenario(const std::string& path);

// Stable hex digest of the serialized scenario; checkpoints carry it so a
// policy is never evaluated against a different world.
std::string scenario_fingerprint(const Scenario& scenario);

}  // namespace orchid
