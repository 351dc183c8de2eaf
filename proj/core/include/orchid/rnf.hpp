#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "orchid/adam.hpp"
#include "orchid/config.hpp"

namespace orchid::rnf {

// Fairness-plateau detector with a one-shot optimizer reset. Episodes are
// 1-indexed: the first recorded JFI belongs to episode 1.
class RnfController {
 public:
  explicit RnfController(RnfParams params = {}, bool enabled = true);

  const RnfParams& params() const { return params_; }
  bool enabled() const { return enabled_; }
  bool triggered() const { return trigger_episode_.has_value(); }
  std::optional<int> trigger_episode() const { return trigger_episode_; }
  const std::vector<double>& history() const { return history_; }
  int episodes_recorded() const { return static_cast<int>(history_.size()); }

  // Throws std::invalid_argument on a non-finite value.
  void update_window(double episode_jfi);

  // Mean of the W values ending at episode e; empty until e >= W.
  std::optional<double> moving_average(int episode) const;
  std::optional<double> moving_average() const { return moving_average(episodes_recorded()); }

  // Evaluates the plateau condition at episode e and latches the first hit.
  // With force_trigger_at set, fires exactly at that episode instead.
  bool check_trigger(int episode);

  // Zeroes both optimizers' moments and step counters and sets each
  // learning rate to kappa times its initial value.
  void apply_reset(learn::OptimizerState& actor_opt, learn::OptimizerState& critic_opt) const;

  nlohmann::json to_json() const;
  static RnfController from_json(const nlohmann::json& j);

 private:
  RnfParams params_;
  bool enabled_ = true;
  std::vector<double> history_;
  std::optional<int> trigger_episode_;
};

}  // namespace orchid::rnf
