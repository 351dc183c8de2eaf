#pragma once

#include <cstdint>

#include "orchid/mlp.hpp"

namespace orchid::learn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam state kept outside the optimizer step so it can be inspected,
// checkpointed and reset.
struct OptimizerState {
  ParamSet first_moment;
  ParamSet second_moment;
  std::int64_t step = 0;
  double learning_rate = 0.0;
  double initial_learning_rate = 0.0;

  void reset_moments();
  bool moments_are_zero() const;
};

OptimizerState make_optimizer(const ParamSet& params, double learning_rate);

// theta <- theta - lr * m_hat / (sqrt(v_hat) + eps) with bias-corrected
// moments.
void adam_step(OptimizerState& state, ParamSet& params, const ParamSet& grads,
               const AdamConfig& config = {});

}  // namespace orchid::learn
