#include "orchid/baselines.hpp"

#include <stdexcept>

#include "orchid/clustering.hpp"
#include "orchid/errors.hpp"
#include "orchid/seeding.hpp"

namespace orchid::baselines {

std::string_view to_string(StaticMethod method) {
  return method == StaticMethod::kRandom ? "static_random" : "static_kmeans";
}

StaticMethod static_method_from_string(std::string_view name) {
  if (name == "static_random") return StaticMethod::kRandom;
  if (name == "static_kmeans") return StaticMethod::kKMeans;
  throw ConfigError("unknown baseline method '" + std::string(name) + "'");
}

std::vector<Vec3> random_feasible_poses(const WorldConfig& world, const EnvParams& env,
                                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> xy(0.0, world.area_side_m);
  std::uniform_real_distribution<double> z(env.altitude_min_m, env.altitude_max_m);
  constexpr int kMaxAttempts = 100000;
  std::vector<Vec3> poses;
  for (int n = 0; n < world.num_uavs; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const Vec3 p{xy(rng), xy(rng), z(rng)};
      placed = true;
      for (const auto& q : poses) {
        if (distance(p, q) < env.min_separation_m) {
          placed = false;
          break;
        }
      }
      if (placed) poses.push_back(p);
    }
    if (!placed) throw std::runtime_error("random_feasible_poses: area too crowded for d_min");
  }
  return poses;
}

std::vector<Vec3> phase1_poses(const Scenario& scenario, const EnvParams& env, int restarts,
                               std::mt19937_64& rng) {
  // Clustering sees every user; the GBS filter then drops the terrestrial cluster.
  return clustering::phase1_initialize(scenario.users, scenario.config.num_uavs,
                                       scenario.config.gbs_position, env.altitude_init_m,
                                       restarts, rng)
      .poses;
}

double random_baseline_ee(const Scenario& scenario, const ChannelParams& channel,
                          const EnvParams& env, int draws) {
  if (draws < 1) throw std::invalid_argument("random_baseline_ee: draws must be positive");
  std::mt19937_64 rng(derive_seed(scenario.seed(), Stream::kBaselineEe));
  env::CoverageEnv e(scenario, channel, env);
  double sum = 0.0;
  for (int d = 0; d < draws; ++d) {
    const auto poses = random_feasible_poses(scenario.config, env, rng);
    sum += e.reset(poses, 0).info.ee_bits_per_joule;
  }
  return sum / draws;
}

metrics::EpisodeMetrics run_static_episode(env::CoverageEnv& env, std::span<const Vec3> poses,
                                           std::uint64_t episode_seed, double baseline_ee) {
  env.reset(poses, episode_seed);
  const std::vector<env::ActionVector> hold(static_cast<std::size_t>(env.num_agents()),
                                            env::ActionVector{});
  metrics::EpisodeAccumulator acc;
  while (!env.done()) {
    const auto out = env.step(hold);
    acc.add_step(out.info.covered_fraction, out.info.ee_bits_per_joule, out.info.jfi_load,
                 out.info.jfi_rate, out.info.team_reward);
  }
  return acc.finish(baseline_ee);
}

std::vector<LogRow> run_baseline(StaticMethod method, const Scenario& scenario,
                                 const RunConfig& config, std::uint64_t seed, int episodes) {
  const double baseline =
      random_baseline_ee(scenario, config.channel, config.env, config.baseline_draws);
  env::CoverageEnv env(scenario, config.channel, config.env);
  std::mt19937_64 pose_rng(derive_seed(seed, Stream::kRandomPoses));
  std::vector<Vec3> poses;
  if (method == StaticMethod::kKMeans) {
    std::mt19937_64 rng(derive_seed(seed, Stream::kPhase1));
    poses = phase1_poses(scenario, config.env, config.clustering_restarts, rng);
  }

  std::vector<LogRow> rows;
  for (int e = 1; e <= episodes; ++e) {
    if (method == StaticMethod::kRandom) poses = random_feasible_poses(scenario.config, config.env, pose_rng);
    const auto m = run_static_episode(env, poses, derive_seed(seed, Stream::kEpisode, e), baseline);
    LogRow r;
    r.seed = seed;
    r.episode = e;
    r.total_reward = m.total_reward;
    r.nee = m.nee;
    r.jfi_load = m.jfi_load_avg;
    r.jfi_rate = m.jfi_rate_avg;
    r.coverage_pct = 100.0 * m.mean_coverage;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace orchid::baselines
