#include "orchid/gae.hpp"

#include <stdexcept>

namespace orchid::learn {

GaeResult gae(std::span<const double> rewards, std::span<const double> values, double gamma,
              double lambda) {
  if (values.size() != rewards.size() + 1) {
    throw std::invalid_argument("gae: values must have one more entry than rewards");
  }
  const std::size_t T = rewards.size();
  GaeResult out;
  out.advantages.assign(T, 0.0);
  out.returns.assign(T, 0.0);
  double running = 0.0;
  for (std::size_t k = T; k-- > 0;) {
    const double delta = rewards[k] + gamma * values[k + 1] - values[k];
    running = delta + gamma * lambda * running;
    out.advantages[k] = running;
    out.returns[k] = running + values[k];
  }
  return out;
}

}  // namespace orchid::learn
