#include "orchid/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>

#include "orchid/errors.hpp"

namespace orchid {
namespace {

using nlohmann::json;

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

bool finite_all(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known,
                    std::string_view section) {
  if (!j.is_object()) {
    throw ConfigError("section '" + std::string(section) + "' must be an object");
  }
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in section '" +
                        std::string(section) + "'");
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void WorldConfig::validate() const {
  require(finite_all({area_side_m, scatter_sigma_m, gbs_position.x, gbs_position.y,
                      gbs_position.z, gbs_power_mw}),
          "world config contains non-finite values");
  require(area_side_m > 0.0, "area_side_m must be positive");
  require(num_clusters >= 1, "num_clusters must be at least 1");
  require(num_users >= num_clusters, "num_users must be >= num_clusters");
  require(num_uavs >= 1, "num_uavs must be at least 1");
  require(scatter_sigma_m > 0.0, "scatter_sigma_m must be positive");
  require(gbs_power_mw > 0.0, "gbs_power_mw must be positive");
}

void ChannelParams::validate() const {
  require(finite_all({s_curve_a, s_curve_b, eta_los_db, eta_nlos_db, carrier_hz,
                      lightspeed_mps, pathloss_exponent, shadow_sigma_db,
                      antenna_gain_tx_db, antenna_gain_rx_db, noise_density_dbm_hz}),
          "channel params contain non-finite values");
  require(s_curve_b > 0.0, "s_curve_b must be positive");
  require(eta_los_db >= 0.0 && eta_nlos_db >= eta_los_db,
          "excess losses must satisfy eta_nlos >= eta_los >= 0");
  require(carrier_hz > 0.0 && lightspeed_mps > 0.0, "carrier and lightspeed must be positive");
  require(pathloss_exponent >= 3.0 && pathloss_exponent <= 4.5,
          "pathloss_exponent must lie in [3.0, 4.5]");
  require(shadow_sigma_db >= 0.0, "shadow_sigma_db must be non-negative");
}

void EnvParams::validate() const {
  require(finite_all({altitude_min_m, altitude_max_m, altitude_init_m, max_speed_mps,
                      step_duration_s, vertical_speed_fraction, power_min_mw, power_max_mw,
                      power_step_mw, min_separation_m, bandwidth_hz, coverage_threshold_db,
                      backhaul_threshold_db, backhaul_norm_span_db, penalty_collision,
                      penalty_boundary, penalty_backhaul, ee_epsilon_w, pf_weight}),
          "env params contain non-finite values");
  require(altitude_min_m > 0.0 && altitude_max_m > altitude_min_m,
          "altitude corridor must satisfy 0 < min < max");
  require(altitude_init_m >= altitude_min_m && altitude_init_m <= altitude_max_m,
          "altitude_init_m must lie inside the corridor");
  require(max_speed_mps > 0.0 && step_duration_s > 0.0, "speed and step duration must be positive");
  require(steps_per_episode >= 1, "steps_per_episode must be at least 1");
  require(vertical_speed_fraction >= 0.0, "vertical_speed_fraction must be non-negative");
  require(power_min_mw > 0.0 && power_max_mw >= power_min_mw,
          "power range must satisfy 0 < min <= max");
  require(power_step_mw >= 0.0, "power_step_mw must be non-negative");
  require(min_separation_m >= 0.0, "min_separation_m must be non-negative");
  require(bandwidth_hz > 0.0, "bandwidth_hz must be positive");
  require(backhaul_norm_span_db > 0.0, "backhaul_norm_span_db must be positive");
  require(std::all_of(weights.begin(), weights.end(),
                      [](double w) { return std::isfinite(w) && w >= 0.0; }),
          "reward weights must be finite and non-negative");
  require(penalty_collision >= 0.0 && penalty_boundary >= 0.0 && penalty_backhaul >= 0.0,
          "penalty intensities must be non-negative");
  require(ee_epsilon_w >= 0.0, "ee_epsilon_w must be non-negative");
  require(histogram_grid >= 1, "histogram_grid must be at least 1");
  require(pf_weight >= 0.0, "pf_weight must be non-negative");
}

void LearnParams::validate() const {
  require(hidden_units >= 1 && hidden_layers >= 0, "invalid network shape");
  require(discount >= 0.0 && discount < 1.0, "discount must lie in [0, 1)");
  require(gae_lambda >= 0.0 && gae_lambda <= 1.0, "gae_lambda must lie in [0, 1]");
  require(clip_eps > 0.0 && clip_eps < 1.0, "clip_eps must lie in (0, 1)");
  require(entropy_coef >= 0.0, "entropy_coef must be non-negative");
  require(epochs >= 1 && minibatch_size >= 1 && rollout_episodes >= 1,
          "epochs, minibatch_size and rollout_episodes must be positive");
  require(actor_lr > 0.0 && critic_lr > 0.0, "learning rates must be positive");
  require(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0,
          "adam betas must lie in [0, 1)");
  require(adam_eps > 0.0, "adam_eps must be positive");
  require(log_std_min < log_std_max, "log_std bounds are inverted");
  require(init_log_std >= log_std_min && init_log_std <= log_std_max,
          "init_log_std must lie within the log_std bounds");
}

void RnfParams::validate() const {
  require(window >= 1, "rnf window must be at least 1");
  require(std::isfinite(tolerance) && tolerance >= 0.0, "rnf tolerance must be non-negative");
  require(kappa > 0.0 && kappa < 1.0, "rnf kappa must lie in (0, 1)");
  require(min_episode >= 0, "rnf min_episode must be non-negative");
  require(!force_trigger_at || *force_trigger_at >= 1, "force_trigger_at must be >= 1");
}

void RunConfig::validate() const {
  require(episodes >= 1, "episodes must be at least 1");
  require(!seeds.empty(), "seeds must be non-empty");
  require(checkpoint_every >= 1, "checkpoint_every must be at least 1");
  require(baseline_draws >= 1, "baseline_draws must be at least 1");
  require(clustering_restarts >= 1, "clustering_restarts must be at least 1");
  require(!method.empty(), "method label must be non-empty");
  world.validate();
  channel.validate();
  env.validate();
  learn.validate();
  rnf.validate();
}

std::string_view to_string(Objective objective) {
  return objective == Objective::kMaxMinFairness ? "mmf" : "pf";
}

Objective objective_from_string(std::string_view name) {
  if (name == "mmf" || name == "MMF") return Objective::kMaxMinFairness;
  if (name == "pf" || name == "PF") return Objective::kProportionalFairness;
  throw ConfigError("unknown objective '" + std::string(name) + "' (expected mmf|pf)");
}

std::string_view to_string(Ablation ablation) {
  switch (ablation) {
    case Ablation::kNone: return "none";
    case Ablation::kNoPhase1: return "no_phase1";
    case Ablation::kNoRnf: return "no_rnf";
  }
  return "none";
}

Ablation ablation_from_string(std::string_view name) {
  if (name == "none") return Ablation::kNone;
  if (name == "no_phase1") return Ablation::kNoPhase1;
  if (name == "no_rnf") return Ablation::kNoRnf;
  throw ConfigError("unknown ablation '" + std::string(name) +
                    "' (expected none|no_phase1|no_rnf)");
}

void to_json(json& j, const Vec2& v) { j = json::array({v.x, v.y}); }
void from_json(const json& j, Vec2& v) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("expected [x, y]");
  v = {j[0].get<double>(), j[1].get<double>()};
}
void to_json(json& j, const Vec3& v) { j = json::array({v.x, v.y, v.z}); }
void from_json(const json& j, Vec3& v) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected [x, y, z]");
  v = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void to_json(json& j, const WorldConfig& c) {
  j = json{{"area_side_m", c.area_side_m},       {"num_users", c.num_users},
           {"num_uavs", c.num_uavs},             {"num_clusters", c.num_clusters},
           {"scatter_sigma_m", c.scatter_sigma_m}, {"gbs_position_m", c.gbs_position},
           {"gbs_power_mw", c.gbs_power_mw},     {"seed", c.seed}};
}
void from_json(const json& j, WorldConfig& c) {
  reject_unknown(j, {"area_side_m", "num_users", "num_uavs", "num_clusters", "scatter_sigma_m",
                     "gbs_position_m", "gbs_power_mw", "seed"},
                 "world");
  read(j, "area_side_m", c.area_side_m);
  read(j, "num_users", c.num_users);
  read(j, "num_uavs", c.num_uavs);
  read(j, "num_clusters", c.num_clusters);
  read(j, "scatter_sigma_m", c.scatter_sigma_m);
  if (j.contains("gbs_position_m")) {
    from_json(j.at("gbs_position_m"), c.gbs_position);
  } else {
    c.gbs_position = {c.area_side_m / 2.0, c.area_side_m / 2.0, c.gbs_position.z};
  }
  read(j, "gbs_power_mw", c.gbs_power_mw);
  read(j, "seed", c.seed);
}

void to_json(json& j, const ChannelParams& c) {
  j = json{{"s_curve_a", c.s_curve_a},
           {"s_curve_b", c.s_curve_b},
           {"eta_los_db", c.eta_los_db},
           {"eta_nlos_db", c.eta_nlos_db},
           {"carrier_hz", c.carrier_hz},
           {"lightspeed_mps", c.lightspeed_mps},
           {"pathloss_exponent", c.pathloss_exponent},
           {"shadow_sigma_db", c.shadow_sigma_db},
           {"antenna_gain_tx_db", c.antenna_gain_tx_db},
           {"antenna_gain_rx_db", c.antenna_gain_rx_db},
           {"noise_density_dbm_hz", c.noise_density_dbm_hz}};
}
void from_json(const json& j, ChannelParams& c) {
  reject_unknown(j, {"s_curve_a", "s_curve_b", "eta_los_db", "eta_nlos_db", "carrier_hz",
                     "lightspeed_mps", "pathloss_exponent", "shadow_sigma_db",
                     "antenna_gain_tx_db", "antenna_gain_rx_db", "noise_density_dbm_hz"},
                 "channel");
  read(j, "s_curve_a", c.s_curve_a);
  read(j, "s_curve_b", c.s_curve_b);
  read(j, "eta_los_db", c.eta_los_db);
  read(j, "eta_nlos_db", c.eta_nlos_db);
  read(j, "carrier_hz", c.carrier_hz);
  read(j, "lightspeed_mps", c.lightspeed_mps);
  read(j, "pathloss_exponent", c.pathloss_exponent);
  read(j, "shadow_sigma_db", c.shadow_sigma_db);
  read(j, "antenna_gain_tx_db", c.antenna_gain_tx_db);
  read(j, "antenna_gain_rx_db", c.antenna_gain_rx_db);
  read(j, "noise_density_dbm_hz", c.noise_density_dbm_hz);
}

void to_json(json& j, const EnvParams& c) {
  j = json{{"altitude_min_m", c.altitude_min_m},
           {"altitude_max_m", c.altitude_max_m},
           {"altitude_init_m", c.altitude_init_m},
           {"max_speed_mps", c.max_speed_mps},
           {"step_duration_s", c.step_duration_s},
           {"steps_per_episode", c.steps_per_episode},
           {"vertical_speed_fraction", c.vertical_speed_fraction},
           {"power_min_mw", c.power_min_mw},
           {"power_max_mw", c.power_max_mw},
           {"power_step_mw", c.power_step_mw},
           {"min_separation_m", c.min_separation_m},
           {"bandwidth_hz", c.bandwidth_hz},
           {"coverage_threshold_db", c.coverage_threshold_db},
           {"backhaul_threshold_db", c.backhaul_threshold_db},
           {"backhaul_norm_span_db", c.backhaul_norm_span_db},
           {"reward_weights", c.weights},
           {"penalty_collision", c.penalty_collision},
           {"penalty_boundary", c.penalty_boundary},
           {"penalty_backhaul", c.penalty_backhaul},
           {"ee_epsilon_w", c.ee_epsilon_w},
           {"histogram_grid", c.histogram_grid},
           {"objective", to_string(c.objective)},
           {"pf_weight", c.pf_weight}};
}
void from_json(const json& j, EnvParams& c) {
  reject_unknown(j, {"altitude_min_m", "altitude_max_m", "altitude_init_m", "max_speed_mps",
                     "step_duration_s", "steps_per_episode", "vertical_speed_fraction",
                     "power_min_mw", "power_max_mw", "power_step_mw", "min_separation_m",
                     "bandwidth_hz", "coverage_threshold_db", "backhaul_threshold_db",
                     "backhaul_norm_span_db", "reward_weights", "penalty_collision",
                     "penalty_boundary", "penalty_backhaul", "ee_epsilon_w", "histogram_grid",
                     "objective", "pf_weight"},
                 "env");
  read(j, "altitude_min_m", c.altitude_min_m);
  read(j, "altitude_max_m", c.altitude_max_m);
  read(j, "altitude_init_m", c.altitude_init_m);
  read(j, "max_speed_mps", c.max_speed_mps);
  read(j, "step_duration_s", c.step_duration_s);
  read(j, "steps_per_episode", c.steps_per_episode);
  read(j, "vertical_speed_fraction", c.vertical_speed_fraction);
  read(j, "power_min_mw", c.power_min_mw);
  read(j, "power_max_mw", c.power_max_mw);
  read(j, "power_step_mw", c.power_step_mw);
  read(j, "min_separation_m", c.min_separation_m);
  read(j, "bandwidth_hz", c.bandwidth_hz);
  read(j, "coverage_threshold_db", c.coverage_threshold_db);
  read(j, "backhaul_threshold_db", c.backhaul_threshold_db);
  read(j, "backhaul_norm_span_db", c.backhaul_norm_span_db);
  if (j.contains("reward_weights")) {
    const auto& w = j.at("reward_weights");
    if (!w.is_array() || w.size() != 5) throw ConfigError("reward_weights needs 5 entries");
    for (std::size_t i = 0; i < 5; ++i) c.weights[i] = w[i].get<double>();
  }
  read(j, "penalty_collision", c.penalty_collision);
  read(j, "penalty_boundary", c.penalty_boundary);
  read(j, "penalty_backhaul", c.penalty_backhaul);
  read(j, "ee_epsilon_w", c.ee_epsilon_w);
  read(j, "histogram_grid", c.histogram_grid);
  if (j.contains("objective")) {
    c.objective = objective_from_string(j.at("objective").get<std::string>());
  }
  read(j, "pf_weight", c.pf_weight);
}

void to_json(json& j, const LearnParams& c) {
  j = json{{"hidden_units", c.hidden_units},
           {"hidden_layers", c.hidden_layers},
           {"discount", c.discount},
           {"gae_lambda", c.gae_lambda},
           {"clip_eps", c.clip_eps},
           {"entropy_coef", c.entropy_coef},
           {"epochs", c.epochs},
           {"minibatch_size", c.minibatch_size},
           {"rollout_episodes", c.rollout_episodes},
           {"actor_lr", c.actor_lr},
           {"critic_lr", c.critic_lr},
           {"adam_beta1", c.adam_beta1},
           {"adam_beta2", c.adam_beta2},
           {"adam_eps", c.adam_eps},
           {"init_log_std", c.init_log_std},
           {"log_std_min", c.log_std_min},
           {"log_std_max", c.log_std_max}};
}
void from_json(const json& j, LearnParams& c) {
  reject_unknown(j, {"hidden_units", "hidden_layers", "discount", "gae_lambda", "clip_eps",
                     "entropy_coef", "epochs", "minibatch_size", "rollout_episodes", "actor_lr",
                     "critic_lr", "adam_beta1", "adam_beta2", "adam_eps", "init_log_std",
                     "log_std_min", "log_std_max"},
                 "learn");
  read(j, "hidden_units", c.hidden_units);
  read(j, "hidden_layers", c.hidden_layers);
  read(j, "discount", c.discount);
  read(j, "gae_lambda", c.gae_lambda);
  read(j, "clip_eps", c.clip_eps);
  read(j, "entropy_coef", c.entropy_coef);
  read(j, "epochs", c.epochs);
  read(j, "minibatch_size", c.minibatch_size);
  read(j, "rollout_episodes", c.rollout_episodes);
  read(j, "actor_lr", c.actor_lr);
  read(j, "critic_lr", c.critic_lr);
  read(j, "adam_beta1", c.adam_beta1);
  read(j, "adam_beta2", c.adam_beta2);
  read(j, "adam_eps", c.adam_eps);
  read(j, "init_log_std", c.init_log_std);
  read(j, "log_std_min", c.log_std_min);
  read(j, "log_std_max", c.log_std_max);
}

void to_json(json& j, const RnfParams& c) {
  j = json{{"window", c.window},
           {"tolerance", c.tolerance},
           {"kappa", c.kappa},
           {"min_episode", c.min_episode}};
  j["force_trigger_at"] = c.force_trigger_at ? json(*c.force_trigger_at) : json(nullptr);
}
void from_json(const json& j, RnfParams& c) {
  reject_unknown(j, {"window", "tolerance", "kappa", "min_episode", "force_trigger_at"}, "rnf");
  read(j, "window", c.window);
  read(j, "tolerance", c.tolerance);
  read(j, "kappa", c.kappa);
  read(j, "min_episode", c.min_episode);
  if (j.contains("force_trigger_at") && !j.at("force_trigger_at").is_null()) {
    c.force_trigger_at = j.at("force_trigger_at").get<int>();
  }
}

void to_json(json& j, const RunConfig& c) {
  j = json{{"method", c.method},
           {"scenario", c.scenario_path},
           {"objective", to_string(c.objective)},
           {"ablation", to_string(c.ablation)},
           {"episodes", c.episodes},
           {"seeds", c.seeds},
           {"checkpoint_every", c.checkpoint_every},
           {"baseline_draws", c.baseline_draws},
           {"clustering_restarts", c.clustering_restarts},
           {"trace", c.trace},
           {"world", c.world},
           {"channel", c.channel},
           {"env", c.env},
           {"learn", c.learn},
           {"rnf", c.rnf}};
}
void from_json(const json& j, RunConfig& c) {
  reject_unknown(j, {"method", "scenario", "objective", "ablation", "episodes", "seeds",
                     "checkpoint_every", "baseline_draws", "clustering_restarts", "trace",
                     "world", "channel", "env", "learn", "rnf"},
                 "run");
  read(j, "method", c.method);
  read(j, "scenario", c.scenario_path);
  if (j.contains("objective")) {
    c.objective = objective_from_string(j.at("objective").get<std::string>());
  }
  if (j.contains("ablation")) {
    c.ablation = ablation_from_string(j.at("ablation").get<std::string>());
  }
  read(j, "episodes", c.episodes);
  read(j, "seeds", c.seeds);
  read(j, "checkpoint_every", c.checkpoint_every);
  read(j, "baseline_draws", c.baseline_draws);
  read(j, "clustering_restarts", c.clustering_restarts);
  read(j, "trace", c.trace);
  if (j.contains("world")) from_json(j.at("world"), c.world);
  if (j.contains("channel")) from_json(j.at("channel"), c.channel);
  if (j.contains("env")) from_json(j.at("env"), c.env);
  if (j.contains("learn")) from_json(j.at("learn"), c.learn);
  if (j.contains("rnf")) from_json(j.at("rnf"), c.rnf);
  // The run-level objective, when given, drives the reward assembly.
  if (j.contains("objective")) {
    c.env.objective = c.objective;
  } else {
    c.objective = c.env.objective;
  }
}

RunConfig parse_run_config(const json& j) {
  RunConfig config;
  try {
    from_json(j, config);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  config.validate();
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse config '" + path + "': " + e.what());
  }
  return parse_run_config(j);
}

}  // namespace orchid
