#include "orchid/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace orchid::learn {

void OptimizerState::reset_moments() {
  for (auto& m : first_moment) m.setZero();
  for (auto& v : second_moment) v.setZero();
  step = 0;
}

bool OptimizerState::moments_are_zero() const {
  for (const auto& m : first_moment) {
    if ((m.array() != 0.0).any()) return false;
  }
  for (const auto& v : second_moment) {
    if ((v.array() != 0.0).any()) return false;
  }
  return step == 0;
}

OptimizerState make_optimizer(const ParamSet& params, double learning_rate) {
  OptimizerState s;
  s.first_moment = zeros_like(params);
  s.second_moment = zeros_like(params);
  s.learning_rate = learning_rate;
  s.initial_learning_rate = learning_rate;
  return s;
}

void adam_step(OptimizerState& state, ParamSet& params, const ParamSet& grads,
               const AdamConfig& config) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw std::invalid_argument("adam_step: tensor count mismatch");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(config.beta1, t);
  const double bias2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (grads[i].rows() != params[i].rows() || grads[i].cols() != params[i].cols()) {
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    }
    auto& m = state.first_moment[i];
    auto& v = state.second_moment[i];
    m = config.beta1 * m + (1.0 - config.beta1) * grads[i];
    v = config.beta2 * v + (1.0 - config.beta2) * grads[i].cwiseAbs2();
    params[i].array() -= state.learning_rate * (m.array() / bias1) /
                         ((v.array() / bias2).sqrt() + config.eps);
  }
}

}  // namespace orchid::learn
