#include "orchid/metrics.hpp"

#include <numeric>
#include <stdexcept>

namespace orchid::metrics {
namespace {

template <class T>
double jain_impl(std::span<const T> values, bool zero_on_degenerate) {
  if (values.empty()) {
    if (zero_on_degenerate) return 0.0;
    throw std::domain_error("jain_index: empty input");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const T v : values) {
    const double x = static_cast<double>(v);
    if (x < 0.0) throw std::domain_error("jain_index: negative entry");
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0.0) {
    if (zero_on_degenerate) return 0.0;
    throw std::domain_error("jain_index: all-zero input");
  }
  return sum * sum / (static_cast<double>(values.size()) * sum_sq);
}

}  // namespace

double jain_index(std::span<const double> values) { return jain_impl(values, false); }
double jain_index_or_zero(std::span<const double> values) { return jain_impl(values, true); }
double jain_index(std::span<const int> counts) { return jain_impl(counts, false); }
double jain_index_or_zero(std::span<const int> counts) { return jain_impl(counts, true); }

double energy_efficiency(std::span<const double> served_rates_bps,
                         std::span<const double> tx_powers_mw, double epsilon_w) {
  const double throughput = std::accumulate(served_rates_bps.begin(), served_rates_bps.end(), 0.0);
  const double power_w =
      std::accumulate(tx_powers_mw.begin(), tx_powers_mw.end(), 0.0) / 1000.0 + epsilon_w;
  if (!(power_w > 0.0)) throw std::domain_error("energy_efficiency: zero radiated power");
  return throughput / power_w;
}

double nee(std::span<const double> ee_series, double random_baseline_mean_ee) {
  if (!(random_baseline_mean_ee > 0.0)) {
    throw std::domain_error("nee: baseline mean EE must be positive");
  }
  if (ee_series.empty()) throw std::domain_error("nee: empty EE series");
  const double mean = std::accumulate(ee_series.begin(), ee_series.end(), 0.0) /
                      static_cast<double>(ee_series.size());
  return mean / random_baseline_mean_ee;
}

double coverage_rate(const std::vector<std::vector<bool>>& masks) {
  if (masks.empty()) throw std::domain_error("coverage_rate: no steps");
  double acc = 0.0;
  for (const auto& mask : masks) {
    if (mask.empty()) continue;
    std::size_t covered = 0;
    for (bool b : mask) covered += b ? 1 : 0;
    acc += static_cast<double>(covered) / static_cast<double>(mask.size());
  }
  return 100.0 * acc / static_cast<double>(masks.size());
}

void EpisodeAccumulator::add_step(double covered_fraction, double ee_bits_per_joule,
                                  double jfi_load, double jfi_rate, double team_reward) {
  ++steps_;
  coverage_sum_ += covered_fraction;
  jfi_load_sum_ += jfi_load;
  jfi_rate_sum_ += jfi_rate;
  reward_sum_ += team_reward;
  ee_.push_back(ee_bits_per_joule);
}

EpisodeMetrics EpisodeAccumulator::finish(double random_baseline_mean_ee) const {
  if (steps_ == 0) throw std::logic_error("EpisodeAccumulator: no steps recorded");
  const double t = static_cast<double>(steps_);
  EpisodeMetrics m;
  m.mean_coverage = coverage_sum_ / t;
  m.mean_ee = std::accumulate(ee_.begin(), ee_.end(), 0.0) / t;
  m.nee = nee(ee_, random_baseline_mean_ee);
  m.jfi_load_avg = jfi_load_sum_ / t;
  m.jfi_rate_avg = jfi_rate_sum_ / t;
  m.total_reward = reward_sum_;
  m.mean_reward = reward_sum_ / t;
  return m;
}

}  // namespace orchid::metrics
