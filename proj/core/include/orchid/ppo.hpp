#pragma once

#include <random>

#include "orchid/adam.hpp"
#include "orchid/policy.hpp"
#include "orchid/rollout.hpp"

namespace orchid::learn {

struct PpoConfig {
  double clip_eps = 0.2;
  double entropy_coef = 0.01;
  int epochs = 4;
  int minibatch_size = 128;
  double log_std_min = -5.0;
  double log_std_max = 2.0;
  AdamConfig adam;
};

struct UpdateStats {
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  int minibatches = 0;
};

// Zero mean, unit variance; returned unchanged when the std is below 1e-8.
Vector normalize_advantages(const Vector& advantages);

// Gathers the given columns of a batch into a minibatch.
RolloutBatch gather(const RolloutBatch& batch, std::span<const Eigen::Index> columns);

// Several epochs of shuffled minibatch updates; actor and critic each step
// their own Adam state. Throws NumericAbort on a non-finite loss.
UpdateStats ppo_update(Actor& actor, Critic& critic, const RolloutBatch& batch,
                       const PpoConfig& config, OptimizerState& actor_opt,
                       OptimizerState& critic_opt, std::mt19937_64& rng);

}  // namespace orchid::learn
