#pragma once

#include <span>
#include <vector>

namespace orchid::metrics {

// Jain's index (sum x)^2 / (n sum x^2), in [1/n, 1]. Throws
// std::domain_error on empty input, negative entries, or an all-zero vector.
double jain_index(std::span<const double> values);

// Training-time variant: an empty or all-zero vector scores 0.
double jain_index_or_zero(std::span<const double> values);

double jain_index(std::span<const int> counts);
double jain_index_or_zero(std::span<const int> counts);

// Throughput per radiated watt in bits/Joule; `epsilon_w` guards the
// denominator.
double energy_efficiency(std::span<const double> served_rates_bps,
                         std::span<const double> tx_powers_mw, double epsilon_w = 0.0);

// Time-averaged EE relative to the static random deployment's mean EE.
double nee(std::span<const double> ee_series, double random_baseline_mean_ee);

// Time-averaged covered fraction in percent.
double coverage_rate(const std::vector<std::vector<bool>>& masks);

struct EpisodeMetrics {
  double mean_coverage = 0.0;  // fraction in [0, 1]
  double nee = 0.0;
  double mean_ee = 0.0;        // bits/Joule
  double jfi_load_avg = 0.0;
  double jfi_rate_avg = 0.0;
  double mean_reward = 0.0;    // per step, averaged over agents
  double total_reward = 0.0;   // summed over steps, averaged over agents
  bool rnf_triggered = false;
};

// Collects per-step quantities over one episode.
class EpisodeAccumulator {
 public:
  void add_step(double covered_fraction, double ee_bits_per_joule, double jfi_load,
                double jfi_rate, double team_reward);
  int steps() const { return steps_; }
  const std::vector<double>& ee_series() const { return ee_; }
  EpisodeMetrics finish(double random_baseline_mean_ee) const;

 private:
  int steps_ = 0;
  double coverage_sum_ = 0.0;
  double jfi_load_sum_ = 0.0;
  double jfi_rate_sum_ = 0.0;
  double reward_sum_ = 0.0;
  std::vector<double> ee_;
};

}  // namespace orchid::metrics
