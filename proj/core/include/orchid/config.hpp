#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "orchid/geometry.hpp"

namespace orchid {

// World layout. Defaults follow the reference deployment (1 km square,
// 50 users in 5 hotspots, 6 UAVs, GBS at the area center).
struct WorldConfig {
  double area_side_m = 1000.0;
  int num_users = 50;
  int num_uavs = 6;
  int num_clusters = 5;
  double scatter_sigma_m = 50.0;
  Vec3 gbs_position{500.0, 500.0, 30.0};
  double gbs_power_mw = 20000.0;
  std::uint64_t seed = 42;

  void validate() const;
};

struct ChannelParams {
  double s_curve_a = 9.61;
  double s_curve_b = 0.16;
  double eta_los_db = 1.0;
  double eta_nlos_db = 20.0;
  double carrier_hz = 2.4e9;
  double lightspeed_mps = 299792458.0;
  double pathloss_exponent = 3.5;
  double shadow_sigma_db = 8.0;
  double antenna_gain_tx_db = 0.0;
  double antenna_gain_rx_db = 0.0;
  double noise_density_dbm_hz = -174.0;

  void validate() const;
};

enum class Objective { kMaxMinFairness, kProportionalFairness };

std::string_view to_string(Objective objective);
Objective objective_from_string(std::string_view name);

// Reward weights w1..w5: coverage, energy efficiency, load fairness,
// rate fairness, penalty.
using RewardWeights = std::array<double, 5>;

struct EnvParams {
  double altitude_min_m = 80.0;
  double altitude_max_m = 120.0;
  double altitude_init_m = 100.0;
  double max_speed_mps = 5.0;
  double step_duration_s = 1.0;
  int steps_per_episode = 100;
  double vertical_speed_fraction = 0.2;
  double power_min_mw = 100.0;
  double power_max_mw = 200.0;
  double power_step_mw = 10.0;
  double min_separation_m = 50.0;
  double bandwidth_hz = 10e6;
  double coverage_threshold_db = 0.0;
  double backhaul_threshold_db = 0.0;
  double backhaul_norm_span_db = 40.0;
  RewardWeights weights{1.0, 1.0, 0.5, 1.0, 1.0};
  double penalty_collision = 1.0;
  double penalty_boundary = 0.5;
  double penalty_backhaul = 0.5;
  double ee_epsilon_w = 1e-9;
  int histogram_grid = 4;
  Objective objective = Objective::kMaxMinFairness;
  double pf_weight = 1.0;

  void validate() const;
};

struct LearnParams {
  int hidden_units = 256;
  int hidden_layers = 3;
  double discount = 0.99;
  double gae_lambda = 0.95;
  double clip_eps = 0.2;
  double entropy_coef = 0.01;
  int epochs = 4;
  int minibatch_size = 128;
  int rollout_episodes = 8;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double init_log_std = -0.5;
  double log_std_min = -5.0;
  double log_std_max = 2.0;

  void validate() const;
};

struct RnfParams {
  int window = 50;
  double tolerance = 0.02;
  double kappa = 0.1;
  int min_episode = 100;
  std::optional<int> force_trigger_at;

  void validate() const;
};

enum class Ablation { kNone, kNoPhase1, kNoRnf };

std::string_view to_string(Ablation ablation);
Ablation ablation_from_string(std::string_view name);

struct RunConfig {
  std::string method = "orchid";
  std::string scenario_path;  // empty: generate from `world`
  Objective objective = Objective::kMaxMinFairness;
  Ablation ablation = Ablation::kNone;
  int episodes = 700;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  int checkpoint_every = 100;
  int baseline_draws = 50;
  int clustering_restarts = 5;
  bool trace = false;

  WorldConfig world;
  ChannelParams channel;
  EnvParams env;
  LearnParams learn;
  RnfParams rnf;

  void validate() const;
};

void to_json(nlohmann::json& j, const Vec2& v);
void from_json(const nlohmann::json& j, Vec2& v);
void to_json(nlohmann::json& j, const Vec3& v);
void from_json(const nlohmann::json& j, Vec3& v);

void to_json(nlohmann::json& j, const WorldConfig& c);
void from_json(const nlohmann::json& j, WorldConfig& c);
void to_json(nlohmann::json& j, const ChannelParams& c);
void from_json(const nlohmann::json& j, ChannelParams& c);
void to_json(nlohmann::json& j, const EnvParams& c);
void from_json(const nlohmann::json& j, EnvParams& c);
void to_json(nlohmann::json& j, const LearnParams& c);
void from_json(const nlohmann::json& j, LearnParams& c);
void to_json(nlohmann::json& j, const RnfParams& c);
void from_json(const nlohmann::json& j, RnfParams& c);
void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

// Reads a JSON run config; missing keys take their defaults, unknown keys
// and invalid values raise ConfigError.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const nlohmann::json& j);

}  // namespace orchid
