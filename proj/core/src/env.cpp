#include "orchid/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "orchid/channel.hpp"
#include "orchid/metrics.hpp"

namespace orchid::env {
namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

RewardBreakdown assemble_reward(const RewardComponents& c, const RewardWeights& w,
                                Objective objective, double pf_weight) {
  RewardBreakdown out;
  out.components = c;
  const double fairness = objective == Objective::kMaxMinFairness
                              ? w[2] * c.load + w[3] * c.rate
                              : pf_weight * c.pf;
  out.total = w[0] * c.coverage + w[1] * c.ee + fairness - w[4] * c.penalty;
  return out;
}

std::vector<PenaltyTerms> compute_penalty(std::span<const Vec3> positions,
                                          const std::vector<bool>& clamped,
                                          std::span<const double> backhaul_snr_db,
                                          const EnvParams& params) {
  const std::size_t n = positions.size();
  std::vector<PenaltyTerms> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && distance(positions[i], positions[j]) < params.min_separation_m) {
        ++out[i].collisions;
      }
    }
    out[i].boundary = i < clamped.size() && clamped[i];
    out[i].backhaul = backhaul_snr_db[i] < params.backhaul_threshold_db;
    out[i].value = params.penalty_collision * out[i].collisions +
                   params.penalty_boundary * (out[i].boundary ? 1.0 : 0.0) +
                   params.penalty_backhaul * (out[i].backhaul ? 1.0 : 0.0);
  }
  return out;
}

double backhaul_snr_db(const Vec3& uav, double power_mw, const Vec3& gbs,
                       const ChannelParams& channel, double bandwidth_hz) {
  const double loss = channel::a2g_los_pathloss_db(gbs, uav, channel);
  return channel::snr_db(channel::mw_to_dbm(power_mw), loss, channel, bandwidth_hz);
}

double RunningMinMax::normalize(double value) {
  if (count_ == 0) {
    lo_ = hi_ = value;
  } else {
    lo_ = std::min(lo_, value);
    hi_ = std::max(hi_, value);
  }
  ++count_;
  if (!(hi_ > lo_)) return 0.0;
  return clamp01((value - lo_) / (hi_ - lo_));
}

CoverageEnv::CoverageEnv(Scenario scenario, ChannelParams channel, EnvParams params)
    : scenario_(std::move(scenario)),
      config_(scenario_.config),
      channel_(channel),
      params_(params) {
  config_.validate();
  channel_.validate();
  params_.validate();
  uav_users_ = scenario_.uav_user_positions();
  gbs_users_ = scenario_.gbs_user_positions();
  if (uav_users_.empty()) throw std::invalid_argument("CoverageEnv: no UAV-tier users");

  const int g = params_.histogram_grid;
  histogram_.assign(static_cast<std::size_t>(g * g), 0.0);
  const double side = config_.area_side_m;
  for (const auto& u : uav_users_) {
    const int cx = std::min(g - 1, static_cast<int>(u.x / side * g));
    const int cy = std::min(g - 1, static_cast<int>(u.y / side * g));
    histogram_[static_cast<std::size_t>(cy * g + cx)] += 1.0;
  }
  for (double& h : histogram_) h /= static_cast<double>(uav_users_.size());
}

int CoverageEnv::state_dim() const {
  return num_agents() * kObsDim + params_.histogram_grid * params_.histogram_grid + 1;
}

bool CoverageEnv::feasible(const Vec3& p) const {
  const double side = config_.area_side_m;
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z) && p.x >= 0.0 &&
         p.x <= side && p.y >= 0.0 && p.y <= side && p.z >= params_.altitude_min_m &&
         p.z <= params_.altitude_max_m;
}

StepOutput CoverageEnv::reset(std::span<const Vec3> initial_poses, std::uint64_t episode_seed) {
  if (static_cast<int>(initial_poses.size()) != num_agents()) {
    throw std::invalid_argument("reset: expected one pose per UAV");
  }
  for (const auto& p : initial_poses) {
    if (!feasible(p)) throw std::invalid_argument("reset: initial pose outside the feasible region");
  }
  state_.positions.assign(initial_poses.begin(), initial_poses.end());
  state_.powers_mw.assign(initial_poses.size(),
                          0.5 * (params_.power_min_mw + params_.power_max_mw));
  state_.t = 0;
  state_.violation_counts.assign(initial_poses.size(), {0, 0, 0});

  std::mt19937_64 rng(episode_seed);
  std::normal_distribution<double> shadow(0.0, channel_.shadow_sigma_db);
  shadowing_db_.resize(gbs_users_.size());
  for (double& s : shadowing_db_) s = channel_.shadow_sigma_db > 0.0 ? shadow(rng) : 0.0;

  const LinkStats links = evaluate_links();
  StepOutput out;
  out.info.loads = links.assoc.loads;
  out.info.rates_bps = links.rates;
  out.info.snr_db = links.snr_db;
  out.info.clamped.assign(initial_poses.size(), false);
  std::size_t covered = 0;
  for (bool b : links.covered) covered += b ? 1 : 0;
  out.info.covered_fraction = static_cast<double>(covered) / static_cast<double>(uav_users_.size());
  std::vector<double> served_rates;
  for (std::size_t m = 0; m < links.rates.size(); ++m) {
    if (links.covered[m]) served_rates.push_back(links.rates[m]);
  }
  out.info.ee_bits_per_joule = metrics::energy_efficiency(served_rates, state_.powers_mw);
  out.info.jfi_load = metrics::jain_index_or_zero(std::span<const int>(links.assoc.loads));
  std::vector<double> positive;
  for (double r : links.rates) {
    if (r > 0.0) positive.push_back(r);
  }
  out.info.jfi_rate = metrics::jain_index_or_zero(positive);
  fill_observations(links, out);
  return out;
}

CoverageEnv::LinkStats CoverageEnv::evaluate_links() const {
  LinkStats s;
  std::vector<double> powers_dbm(state_.powers_mw.size());
  for (std::size_t n = 0; n < powers_dbm.size(); ++n) {
    powers_dbm[n] = channel::mw_to_dbm(state_.powers_mw[n]);
  }
  s.assoc = network::associate_max_rssi(state_.positions, powers_dbm, uav_users_, channel_);
  s.snr_db = network::serving_snr_db(s.assoc, state_.positions, powers_dbm, uav_users_, channel_,
                                     params_.bandwidth_hz);
  s.rates = network::user_rates(s.assoc, s.snr_db, params_.bandwidth_hz);
  s.covered = network::coverage_mask(s.snr_db, params_.coverage_threshold_db);
  s.backhaul_db.resize(state_.positions.size());
  for (std::size_t n = 0; n < state_.positions.size(); ++n) {
    s.backhaul_db[n] = backhaul_snr_db(state_.positions[n], state_.powers_mw[n],
                                       config_.gbs_position, channel_, params_.bandwidth_hz);
  }
  return s;
}

StepOutput CoverageEnv::step(std::span<const ActionVector> actions) {
  if (done()) throw std::logic_error("step: episode already finished; call reset()");
  if (static_cast<int>(actions.size()) != num_agents()) {
    throw std::invalid_argument("step: expected one action per UAV");
  }
  for (const auto& a : actions) {
    for (double v : a) {
      if (std::isnan(v)) throw std::invalid_argument("step: NaN action component");
    }
  }

  const double side = config_.area_side_m;
  const double horizontal_limit = params_.max_speed_mps * params_.step_duration_s;
  const double vertical_scale = params_.vertical_speed_fraction * horizontal_limit;
  std::vector<bool> clamped(actions.size(), false);

  for (std::size_t n = 0; n < actions.size(); ++n) {
    ActionVector a = actions[n];
    for (double& v : a) v = std::clamp(v, -1.0, 1.0);
    double dx = horizontal_limit * a[0];
    double dy = horizontal_limit * a[1];
    const double planar = std::hypot(dx, dy);
    if (planar > horizontal_limit) {
      dx *= horizontal_limit / planar;
      dy *= horizontal_limit / planar;
    }
    Vec3& q = state_.positions[n];
    const Vec3 target{q.x + dx, q.y + dy, q.z + vertical_scale * a[2]};
    q.x = std::clamp(target.x, 0.0, side);
    q.y = std::clamp(target.y, 0.0, side);
    q.z = std::clamp(target.z, params_.altitude_min_m, params_.altitude_max_m);
    clamped[n] = q.x != target.x || q.y != target.y || q.z != target.z;

    double& p = state_.powers_mw[n];
    p = std::clamp(p + params_.power_step_mw * a[3], params_.power_min_mw, params_.power_max_mw);
  }
  ++state_.t;

  const LinkStats links = evaluate_links();
  const auto m_uav = static_cast<double>(uav_users_.size());

  std::size_t covered = 0;
  std::vector<double> served_rates;
  for (std::size_t m = 0; m < links.rates.size(); ++m) {
    if (links.covered[m]) {
      ++covered;
      served_rates.push_back(links.rates[m]);
    }
  }
  std::vector<double> positive_rates;
  double log_utility = 0.0;
  for (double r : links.rates) {
    if (r > 0.0) positive_rates.push_back(r);
    log_utility += std::log1p(r);
  }

  RewardComponents team;
  team.coverage = static_cast<double>(covered) / m_uav;
  team.ee = ee_norm_.normalize(
      metrics::energy_efficiency(served_rates, state_.powers_mw, params_.ee_epsilon_w));
  team.load = metrics::jain_index_or_zero(std::span<const int>(links.assoc.loads));
  team.rate = metrics::jain_index_or_zero(positive_rates);
  team.pf_utility = log_utility;
  if (params_.objective == Objective::kProportionalFairness) {
    team.pf = pf_norm_.normalize(log_utility);
  }

  const auto penalties = compute_penalty(state_.positions, clamped, links.backhaul_db, params_);

  StepOutput out;
  out.rewards.resize(actions.size());
  out.breakdowns.resize(actions.size());
  double reward_sum = 0.0;
  for (std::size_t n = 0; n < actions.size(); ++n) {
    auto& counts = state_.violation_counts[n];
    counts[kCollision] += penalties[n].collisions > 0 ? 1 : 0;
    counts[kBoundary] += penalties[n].boundary ? 1 : 0;
    counts[kBackhaul] += penalties[n].backhaul ? 1 : 0;

    RewardComponents c = team;
    c.penalty = penalties[n].value;
    out.breakdowns[n] = assemble_reward(c, params_.weights, params_.objective, params_.pf_weight);
    out.rewards[n] = out.breakdowns[n].total;
    reward_sum += out.rewards[n];
  }

  out.info.covered_fraction = team.coverage;
  out.info.ee_bits_per_joule =
      served_rates.empty() ? 0.0 : metrics::energy_efficiency(served_rates, state_.powers_mw);
  out.info.jfi_load = team.load;
  out.info.jfi_rate = team.rate;
  out.info.team_reward = reward_sum / static_cast<double>(actions.size());
  out.info.loads = links.assoc.loads;
  out.info.rates_bps = links.rates;
  out.info.snr_db = links.snr_db;
  out.info.clamped = clamped;
  out.done = done();
  fill_observations(links, out);
  return out;
}

void CoverageEnv::fill_observations(const LinkStats& links, StepOutput& out) const {
  const double side = config_.area_side_m;
  const double half = side / 2.0;
  const double diag = side * std::sqrt(2.0);
  const double corridor = params_.altitude_max_m - params_.altitude_min_m;
  const double power_span = params_.power_max_mw - params_.power_min_mw;
  const double elapsed = std::max(1, state_.t);
  const auto m_uav = static_cast<double>(uav_users_.size());

  out.observations.resize(state_.positions.size());
  for (std::size_t n = 0; n < state_.positions.size(); ++n) {
    const Vec3& q = state_.positions[n];
    Observation& o = out.observations[n];
    o[0] = clamp01(q.x / side);
    o[1] = clamp01(q.y / side);
    o[2] = clamp01((q.z - params_.altitude_min_m) / corridor);
    o[3] = power_span > 0.0 ? clamp01((state_.powers_mw[n] - params_.power_min_mw) / power_span)
                            : 0.0;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& u : uav_users_) nearest = std::min(nearest, horizontal_distance(q, u));
    o[4] = clamp01(nearest / diag);
    o[5] = clamp01(links.assoc.loads[n] / m_uav);
    o[6] = clamp01(q.x / half);
    o[7] = clamp01((side - q.x) / half);
    o[8] = clamp01(q.y / half);
    o[9] = clamp01((side - q.y) / half);
    const auto& counts = state_.violation_counts[n];
    for (int k = 0; k < 3; ++k) o[10 + k] = state_.t == 0 ? 0.0 : clamp01(counts[k] / elapsed);
    o[13] = clamp01((links.backhaul_db[n] - params_.backhaul_threshold_db) /
                    params_.backhaul_norm_span_db);
  }

  out.global_state.clear();
  out.global_state.reserve(static_cast<std::size_t>(state_dim()));
  for (const auto& o : out.observations) {
    out.global_state.insert(out.global_state.end(), o.begin(), o.end());
  }
  out.global_state.insert(out.global_state.end(), histogram_.begin(), histogram_.end());
  std::vector<double> positive;
  for (double r : links.rates) {
    if (r > 0.0) positive.push_back(r);
  }
  out.global_state.push_back(metrics::jain_index_or_zero(positive));
}

std::vector<double> CoverageEnv::gbs_user_snr_db() const {
  const double tx_dbm = channel::mw_to_dbm(config_.gbs_power_mw);
  std::vector<double> out(gbs_users_.size());
  for (std::size_t m = 0; m < gbs_users_.size(); ++m) {
    const double shadow = m < shadowing_db_.size() ? shadowing_db_[m] : 0.0;
    const double loss = channel::gbs_pathloss_db(config_.gbs_position, gbs_users_[m], shadow, channel_);
    out[m] = channel::snr_db(tx_dbm, loss, channel_, params_.bandwidth_hz);
  }
  return out;
}

}  // namespace orchid::env
