#include "orchid/rollout.hpp"

#include <stdexcept>

#include "orchid/gae.hpp"

namespace orchid::learn {

EpisodeRollout EpisodeRollout::allocate(int steps, int agents, int obs_dim, int action_dim,
                                        int state_dim) {
  EpisodeRollout e;
  e.steps = steps;
  e.agents = agents;
  const Eigen::Index cols = static_cast<Eigen::Index>(steps) * agents;
  e.actor_inputs = Matrix::Zero(obs_dim, cols);
  e.pre_squash = Matrix::Zero(action_dim, cols);
  e.log_probs = Vector::Zero(cols);
  e.rewards = Vector::Zero(cols);
  e.states = Matrix::Zero(state_dim, steps);
  e.values = Vector::Zero(steps + 1);
  return e;
}

void RolloutBuffer::add(EpisodeRollout episode) {
  if (!episodes_.empty()) {
    const auto& first = episodes_.front();
    if (first.actor_inputs.rows() != episode.actor_inputs.rows() ||
        first.states.rows() != episode.states.rows() ||
        first.pre_squash.rows() != episode.pre_squash.rows()) {
      throw std::invalid_argument("RolloutBuffer: inconsistent episode shapes");
    }
  }
  episodes_.push_back(std::move(episode));
}

RolloutBatch RolloutBuffer::assemble(double gamma, double lambda) const {
  if (episodes_.empty()) throw std::logic_error("RolloutBuffer: nothing to assemble");
  Eigen::Index total = 0;
  for (const auto& e : episodes_) total += e.actor_inputs.cols();
  const auto& first = episodes_.front();

  RolloutBatch b;
  b.obs.resize(first.actor_inputs.rows(), total);
  b.states.resize(first.states.rows(), total);
  b.pre_squash.resize(first.pre_squash.rows(), total);
  b.old_log_prob.resize(total);
  b.advantages.resize(total);
  b.returns.resize(total);

  Eigen::Index offset = 0;
  std::vector<double> rewards;
  const std::vector<double> dummy;
  for (const auto& e : episodes_) {
    const Eigen::Index cols = e.actor_inputs.cols();
    b.obs.middleCols(offset, cols) = e.actor_inputs;
    b.pre_squash.middleCols(offset, cols) = e.pre_squash;
    b.old_log_prob.segment(offset, cols) = e.log_probs;
    std::vector<double> values(e.values.data(), e.values.data() + e.values.size());
    for (int n = 0; n < e.agents; ++n) {
      rewards.assign(static_cast<std::size_t>(e.steps), 0.0);
      for (int t = 0; t < e.steps; ++t) rewards[static_cast<std::size_t>(t)] = e.rewards[e.column(t, n)];
      const GaeResult g = gae(rewards, values, gamma, lambda);
      for (int t = 0; t < e.steps; ++t) {
        const Eigen::Index c = offset + e.column(t, n);
        b.advantages[c] = g.advantages[static_cast<std::size_t>(t)];
        b.returns[c] = g.returns[static_cast<std::size_t>(t)];
        b.states.col(c) = e.states.col(t);
      }
    }
    offset += cols;
  }
  return b;
}

}  // namespace orchid::learn
