#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "orchid/checkpoint.hpp"
#include "orchid/env.hpp"
#include "orchid/metrics.hpp"
#include "orchid/ppo.hpp"
#include "orchid/rnf.hpp"
#include "orchid/rollout.hpp"
#include "orchid/run_log.hpp"
#include "orchid/scenario.hpp"

namespace orchid {

// Actor input: local observation followed by a one-hot agent id.
int actor_input_dim(int num_agents);
learn::Matrix actor_inputs(const std::vector<env::Observation>& observations);

learn::PpoConfig ppo_config(const LearnParams& learn);

// One seed of the two-stage procedure: Phase-I placement, then episodes of
// decentralized acting with a shared actor and a centralized critic.
class Trainer {
 public:
  Trainer(RunConfig config, const Scenario& scenario, std::uint64_t seed);
  // Continues from a checkpoint. Throws std::runtime_error when the
  // scenario differs from the one the checkpoint was trained on.
  Trainer(const Checkpoint& checkpoint, const Scenario& scenario);

  // Runs the next episode, the PPO update when the rollout buffer is full
  // and the plateau check. `trace`, when given, receives per-step poses.
  LogRow run_episode(std::ostream* trace = nullptr);

  int episode() const { return episode_; }
  bool finished() const { return episode_ >= config_.episodes; }
  bool triggered_last_episode() const { return triggered_last_; }
  std::uint64_t seed() const { return seed_; }
  const RunConfig& config() const { return config_; }
  const std::vector<Vec3>& initial_poses() const { return poses_; }
  double baseline_ee() const { return baseline_ee_; }
  const learn::Actor& actor() const { return actor_; }
  const learn::Critic& critic() const { return critic_; }
  const learn::OptimizerState& actor_optimizer() const { return actor_opt_; }
  const learn::OptimizerState& critic_optimizer() const { return critic_opt_; }
  const rnf::RnfController& rnf() const { return rnf_; }
  const std::optional<learn::UpdateStats>& last_update() const { return last_update_; }

  Checkpoint checkpoint() const;

 private:
  RunConfig config_;
  std::uint64_t seed_ = 0;
  std::string fingerprint_;
  env::CoverageEnv env_;
  std::vector<Vec3> poses_;
  double baseline_ee_ = 0.0;
  learn::Actor actor_;
  learn::Critic critic_;
  learn::OptimizerState actor_opt_;
  learn::OptimizerState critic_opt_;
  std::mt19937_64 rng_;
  rnf::RnfController rnf_;
  learn::RolloutBuffer buffer_;
  int episode_ = 0;
  bool triggered_last_ = false;
  std::optional<learn::UpdateStats> last_update_;
};

// Label used for run directories and exports, e.g. "orchid_no_rnf".
std::string run_label(const RunConfig& config);

struct TrainResult {
  std::vector<LogRow> rows;
  std::vector<std::pair<std::uint64_t, std::optional<int>>> trigger_episodes;
};

// Trains every configured seed in turn. Writes <out>/log.csv,
// <out>/manifest.json and per-seed checkpoints under <out>/seed_<s>/.
// On a numeric abort a diagnostic checkpoint is written before rethrowing.
TrainResult train(const RunConfig& config, const Scenario& scenario, const std::string& out_dir,
                  std::ostream* progress = nullptr);

// Continues the seed stored in `checkpoint_path`. Existing rows of the run
// log up to the checkpoint episode are kept; later ones are regenerated.
TrainResult resume_training(const std::string& checkpoint_path, const Scenario& scenario,
                            const std::string& out_dir, std::ostream* progress = nullptr);

std::string checkpoint_path(const std::string& out_dir, std::uint64_t seed, int episode);

}  // namespace orchid
