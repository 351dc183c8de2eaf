#include "orchid/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "orchid/errors.hpp"

namespace orchid::learn {

Vector normalize_advantages(const Vector& advantages) {
  const Eigen::Index n = advantages.size();
  if (n == 0) return advantages;
  const double mean = advantages.mean();
  const double var = (advantages.array() - mean).square().sum() / static_cast<double>(n);
  const double std = std::sqrt(var);
  if (std < 1e-8) return advantages;
  return ((advantages.array() - mean) / std).matrix();
}

RolloutBatch gather(const RolloutBatch& batch, std::span<const Eigen::Index> columns) {
  const auto n = static_cast<Eigen::Index>(columns.size());
  RolloutBatch mb;
  mb.obs.resize(batch.obs.rows(), n);
  mb.states.resize(batch.states.rows(), n);
  mb.pre_squash.resize(batch.pre_squash.rows(), n);
  mb.old_log_prob.resize(n);
  mb.advantages.resize(n);
  mb.returns.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index c = columns[static_cast<std::size_t>(i)];
    mb.obs.col(i) = batch.obs.col(c);
    mb.states.col(i) = batch.states.col(c);
    mb.pre_squash.col(i) = batch.pre_squash.col(c);
    mb.old_log_prob[i] = batch.old_log_prob[c];
    mb.advantages[i] = batch.advantages[c];
    mb.returns[i] = batch.returns[c];
  }
  return mb;
}

UpdateStats ppo_update(Actor& actor, Critic& critic, const RolloutBatch& batch,
                       const PpoConfig& config, OptimizerState& actor_opt,
                       OptimizerState& critic_opt, std::mt19937_64& rng) {
  if (batch.size() == 0) throw std::invalid_argument("ppo_update: empty batch");
  RolloutBatch normalized = batch;
  normalized.advantages = normalize_advantages(batch.advantages);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(batch.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  UpdateStats stats;
  ParamSet actor_grads;
  ParamSet critic_grads;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.minibatch_size)) {
      const std::size_t len =
          std::min(static_cast<std::size_t>(config.minibatch_size), order.size() - start);
      const RolloutBatch mb =
          gather(normalized, std::span<const Eigen::Index>(order.data() + start, len));

      const ActorLossStats a = actor_loss(
          actor, {mb.obs, mb.pre_squash, mb.old_log_prob, mb.advantages}, config.clip_eps,
          config.entropy_coef, &actor_grads);
      const double c = critic_loss(critic, mb.states, mb.returns, &critic_grads);
      if (!std::isfinite(a.loss) || !std::isfinite(c) || !all_finite(actor_grads) ||
          !all_finite(critic_grads)) {
        throw NumericAbort("ppo_update: non-finite loss or gradient (actor " +
                           std::to_string(a.loss) + ", critic " + std::to_string(c) + ")");
      }
      adam_step(actor_opt, actor.params, actor_grads, config.adam);
      actor.params.back() = actor.params.back().cwiseMax(config.log_std_min).cwiseMin(config.log_std_max);
      adam_step(critic_opt, critic.params, critic_grads, config.adam);

      stats.actor_loss += a.loss;
      stats.critic_loss += c;
      stats.entropy += a.entropy;
      stats.clip_fraction += a.clip_fraction;
      stats.approx_kl += a.approx_kl;
      ++stats.minibatches;
    }
  }
  const double k = std::max(1, stats.minibatches);
  stats.actor_loss /= k;
  stats.critic_loss /= k;
  stats.entropy /= k;
  stats.clip_fraction /= k;
  stats.approx_kl /= k;
  return stats;
}

}  // namespace orchid::learn
