#include "orchid/evaluate.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "orchid/env.hpp"
#include "orchid/seeding.hpp"
#include "orchid/trainer.hpp"

namespace orchid {

EvaluationResult summarize(std::vector<metrics::EpisodeMetrics> episodes) {
  EvaluationResult r;
  r.episodes = std::move(episodes);
  if (r.episodes.empty()) return r;
  const auto add = [&](const std::string& name, auto field) {
    double sum = 0.0;
    for (const auto& m : r.episodes) sum += field(m);
    const double n = static_cast<double>(r.episodes.size());
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& m : r.episodes) sq += (field(m) - mean) * (field(m) - mean);
    r.summary[name] = {mean, std::sqrt(sq / n)};
  };
  add("coverage_pct", [](const metrics::EpisodeMetrics& m) { return 100.0 * m.mean_coverage; });
  add("nee", [](const metrics::EpisodeMetrics& m) { return m.nee; });
  add("mean_ee", [](const metrics::EpisodeMetrics& m) { return m.mean_ee; });
  add("jfi_load", [](const metrics::EpisodeMetrics& m) { return m.jfi_load_avg; });
  add("jfi_rate", [](const metrics::EpisodeMetrics& m) { return m.jfi_rate_avg; });
  add("total_reward", [](const metrics::EpisodeMetrics& m) { return m.total_reward; });
  return r;
}

EvaluationResult evaluate_policy(const learn::Actor& actor, const RunConfig& config,
                                 const Scenario& scenario, std::span<const Vec3> initial_poses,
                                 double baseline_ee, int episodes, std::uint64_t eval_seed,
                                 std::ostream* trace) {
  if (episodes < 1) throw std::invalid_argument("evaluate: episodes must be positive");
  env::CoverageEnv env(scenario, config.channel, config.env);
  if (actor.input_dim() != actor_input_dim(env.num_agents())) {
    throw std::runtime_error("evaluate: actor input size does not match the scenario");
  }
  std::vector<env::ActionVector> actions(static_cast<std::size_t>(env.num_agents()));
  std::vector<metrics::EpisodeMetrics> results;
  for (int e = 1; e <= episodes; ++e) {
    auto out = env.reset(initial_poses, derive_seed(eval_seed, Stream::kEvaluation, e));
    metrics::EpisodeAccumulator acc;
    while (!env.done()) {
      const learn::Matrix mean = learn::policy_forward(actor, actor_inputs(out.observations)).mean;
      for (int n = 0; n < env.num_agents(); ++n) {
        for (int k = 0; k < env::kActionDim; ++k) {
          actions[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] = std::tanh(mean(k, n));
        }
      }
      out = env.step(actions);
      acc.add_step(out.info.covered_fraction, out.info.ee_bits_per_joule, out.info.jfi_load,
                   out.info.jfi_rate, out.info.team_reward);
      if (trace) {
        const auto& st = env.state();
        for (int n = 0; n < env.num_agents(); ++n) {
          const auto i = static_cast<std::size_t>(n);
          *trace << e << ',' << st.t << ',' << n << ',' << st.positions[i].x << ','
                 << st.positions[i].y << ',' << st.positions[i].z << ',' << st.powers_mw[i] << ','
                 << out.info.loads[i] << '\n';
        }
      }
    }
    results.push_back(acc.finish(baseline_ee));
  }
  return summarize(std::move(results));
}

EvaluationResult evaluate(const Checkpoint& c, const Scenario& scenario, int episodes,
                          std::uint64_t eval_seed, std::ostream* trace) {
  if (scenario_fingerprint(scenario) != c.scenario_fingerprint) {
    throw std::runtime_error("checkpoint and scenario do not match (fingerprint " +
                             c.scenario_fingerprint + " vs " + scenario_fingerprint(scenario) +
                             ")");
  }
  return evaluate_policy(c.actor, c.config, scenario, c.initial_poses, c.baseline_ee, episodes,
                         eval_seed, trace);
}

}  // namespace orchid
