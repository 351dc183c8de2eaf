#pragma once

#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "orchid/config.hpp"
#include "orchid/env.hpp"
#include "orchid/metrics.hpp"
#include "orchid/run_log.hpp"
#include "orchid/scenario.hpp"

namespace orchid::baselines {

enum class StaticMethod { kRandom, kKMeans };

std::string_view to_string(StaticMethod method);
StaticMethod static_method_from_string(std::string_view name);  // throws ConfigError

// Uniform poses inside the area and altitude corridor, pairwise at least
// d_min apart in 3D.
std::vector<Vec3> random_feasible_poses(const WorldConfig& world, const EnvParams& env,
                                        std::mt19937_64& rng);

std::vector<Vec3> phase1_poses(const Scenario& scenario, const EnvParams& env, int restarts,
                               std::mt19937_64& rng);

// Mean system EE of `draws` static random deployments at mid-range power.
// Seeded from the scenario alone, so every method shares one reference.
double random_baseline_ee(const Scenario& scenario, const ChannelParams& channel,
                          const EnvParams& env, int draws);

// Holds the given poses for a full episode with zero actions.
metrics::EpisodeMetrics run_static_episode(env::CoverageEnv& env, std::span<const Vec3> poses,
                                           std::uint64_t episode_seed, double baseline_ee);

// Per-episode log of a static deployment. static_random redraws its poses
// every episode; static_kmeans keeps the Phase-I poses.
std::vector<LogRow> run_baseline(StaticMethod method, const Scenario& scenario,
                                 const RunConfig& config, std::uint64_t seed, int episodes);

}  // namespace orchid::baselines
