#include "orchid/rnf.hpp"

#include <cmath>
#include <stdexcept>

namespace orchid::rnf {

RnfController::RnfController(RnfParams params, bool enabled)
    : params_(std::move(params)), enabled_(enabled) {
  params_.validate();
}

void RnfController::update_window(double episode_jfi) {
  if (!std::isfinite(episode_jfi)) throw std::invalid_argument("update_window: non-finite JFI");
  history_.push_back(episode_jfi);
}

std::optional<double> RnfController::moving_average(int episode) const {
  const int w = params_.window;
  if (episode < w || episode > episodes_recorded()) return std::nullopt;
  double sum = 0.0;
  for (int e = episode - w; e < episode; ++e) sum += history_[static_cast<std::size_t>(e)];
  return sum / w;
}

bool RnfController::check_trigger(int episode) {
  if (!enabled_ || triggered()) return false;
  if (params_.force_trigger_at) {
    if (episode != *params_.force_trigger_at) return false;
    trigger_episode_ = episode;
    return true;
  }
  const int w = params_.window;
  if (episode < 2 * w || episode < params_.min_episode) return false;
  const auto now = moving_average(episode);
  const auto before = moving_average(episode - w);
  if (!now || !before) return false;
  if (std::abs(*now - *before) < params_.tolerance * *before) {
    trigger_episode_ = episode;
    return true;
  }
  return false;
}

void RnfController::apply_reset(learn::OptimizerState& actor_opt,
                                learn::OptimizerState& critic_opt) const {
  actor_opt.reset_moments();
  critic_opt.reset_moments();
  actor_opt.learning_rate = params_.kappa * actor_opt.initial_learning_rate;
  critic_opt.learning_rate = params_.kappa * critic_opt.initial_learning_rate;
}

nlohmann::json RnfController::to_json() const {
  nlohmann::json j;
  j["params"] = params_;
  j["enabled"] = enabled_;
  j["history"] = history_;
  j["trigger_episode"] = trigger_episode_ ? nlohmann::json(*trigger_episode_) : nlohmann::json();
  return j;
}

RnfController RnfController::from_json(const nlohmann::json& j) {
  RnfController c(j.at("params").get<RnfParams>(), j.at("enabled").get<bool>());
  c.history_ = j.at("history").get<std::vector<double>>();
  if (!j.at("trigger_episode").is_null()) c.trigger_episode_ = j.at("trigger_episode").get<int>();
  return c;
}

}  // namespace orchid::rnf
