#pragma once

#include <vector>

#include "orchid/mlp.hpp"

namespace orchid::learn {

// One episode of shared-policy experience. Per-agent columns are indexed
// t * agents + n; the critic sees one global state per step.
struct EpisodeRollout {
  int steps = 0;
  int agents = 0;
  Matrix actor_inputs;  // obs_dim x (steps * agents)
  Matrix pre_squash;    // action_dim x (steps * agents)
  Vector log_probs;     // Gaussian log-density of pre_squash under the behavior policy
  Vector rewards;       // steps * agents
  Matrix states;        // state_dim x steps
  Vector values;        // steps + 1; the last entry bootstraps the tail

  static EpisodeRollout allocate(int steps, int agents, int obs_dim, int action_dim,
                                 int state_dim);
  Eigen::Index column(int t, int agent) const { return static_cast<Eigen::Index>(t) * agents + agent; }
};

struct RolloutBatch {
  Matrix obs;
  Matrix states;
  Matrix pre_squash;
  Vector old_log_prob;
  Vector advantages;
  Vector returns;

  Eigen::Index size() const { return obs.cols(); }
};

class RolloutBuffer {
 public:
  void add(EpisodeRollout episode);
  void clear() { episodes_.clear(); }
  std::size_t episodes() const { return episodes_.size(); }
  const std::vector<EpisodeRollout>& data() const { return episodes_; }

  // Runs GAE per (episode, agent) against the shared state values and
  // flattens everything into one batch.
  RolloutBatch assemble(double gamma, double lambda) const;

 private:
  std::vector<EpisodeRollout> episodes_;
};

}  // namespace orchid::learn
