#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "orchid/checkpoint.hpp"
#include "orchid/metrics.hpp"
#include "orchid/scenario.hpp"

namespace orchid {

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over episodes
};

struct EvaluationResult {
  std::vector<metrics::EpisodeMetrics> episodes;
  // coverage_pct, nee, mean_ee, jfi_load, jfi_rate, total_reward
  std::map<std::string, MetricSummary> summary;
};

EvaluationResult summarize(std::vector<metrics::EpisodeMetrics> episodes);

// Rolls out tanh(mean) actions, without exploration noise, from the given
// initial poses. Episode seeds derive from `eval_seed`.
EvaluationResult evaluate_policy(const learn::Actor& actor, const RunConfig& config,
                                 const Scenario& scenario, std::span<const Vec3> initial_poses,
                                 double baseline_ee, int episodes, std::uint64_t eval_seed,
                                 std::ostream* trace = nullptr);

// Throws std::runtime_error when the checkpoint belongs to another scenario.
EvaluationResult evaluate(const Checkpoint& checkpoint, const Scenario& scenario, int episodes,
                          std::uint64_t eval_seed, std::ostream* trace = nullptr);

}  // namespace orchid
