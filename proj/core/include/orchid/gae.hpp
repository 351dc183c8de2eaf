#pragma once

#include <span>
#include <vector>

namespace orchid::learn {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values
};

// delta_t = r_t + gamma V_{t+1} - V_t,  A_t = sum_k (gamma lambda)^k delta_{t+k}.
// `values` holds T + 1 entries; the last one bootstraps the tail.
GaeResult gae(std::span<const double> rewards, std::span<const double> values, double gamma,
              double lambda);

}  // namespace orchid::learn
