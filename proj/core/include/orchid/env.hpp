#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "orchid/config.hpp"
#include "orchid/geometry.hpp"
#include "orchid/network.hpp"
#include "orchid/scenario.hpp"

namespace orchid::env {

// Local observation layout:
//   [0..2]  normalized position (x/D, y/D, altitude within the corridor)
//   [3]     normalized transmit power
//   [4]     horizontal distance to the nearest UAV-tier user / (D*sqrt2)
//   [5]     load fraction K_n / M_UAV
//   [6..9]  margins to the west, east, south, north edges / (D/2), capped at 1
//   [10..12] collision, boundary, backhaul violation counts / elapsed steps
//   [13]    backhaul SNR above threshold / normalization span, in [0, 1]
inline constexpr int kObsDim = 14;
inline constexpr int kActionDim = 4;

using Observation = std::array<double, kObsDim>;
using ActionVector = std::array<double, kActionDim>;  // dx, dy, dz, dP in [-1, 1]

enum ViolationKind { kCollision = 0, kBoundary = 1, kBackhaul = 2 };

struct FleetState {
  std::vector<Vec3> positions;
  std::vector<double> powers_mw;
  int t = 0;
  std::vector<std::array<int, 3>> violation_counts;
};

struct RewardComponents {
  double coverage = 0.0;
  double ee = 0.0;
  double load = 0.0;
  double rate = 0.0;
  double pf = 0.0;  // normalized sum of log(1 + R_m); used by the PF objective
  double pf_utility = 0.0;  // the raw sum, before normalization
  double penalty = 0.0;
};

struct RewardBreakdown {
  RewardComponents components;
  double total = 0.0;
};

// MMF: w1 cov + w2 ee + w3 load + w4 rate - w5 pen.
// PF:  w1 cov + w2 ee + pf_weight * pf - w5 pen.
RewardBreakdown assemble_reward(const RewardComponents& components, const RewardWeights& weights,
                                Objective objective, double pf_weight);

struct PenaltyTerms {
  int collisions = 0;
  bool boundary = false;
  bool backhaul = false;
  double value = 0.0;
};

// Per-agent penalty: omega_c * #{j != n : d_nj < d_min} + omega_b * clamped
// + omega_bh * [backhaul SNR < threshold].
std::vector<PenaltyTerms> compute_penalty(std::span<const Vec3> positions,
                                          const std::vector<bool>& clamped,
                                          std::span<const double> backhaul_snr_db,
                                          const EnvParams& params);

// UAV-to-GBS link SNR with line of sight forced.
double backhaul_snr_db(const Vec3& uav, double power_mw, const Vec3& gbs,
                       const ChannelParams& channel, double bandwidth_hz);

// Min-max scaling against every value observed so far.
class RunningMinMax {
 public:
  double normalize(double value);
  bool empty() const { return count_ == 0; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::uint64_t count() const { return count_; }
  void restore(double lo, double hi, std::uint64_t count) {
    lo_ = lo;
    hi_ = hi;
    count_ = count;
  }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::uint64_t count_ = 0;
};

struct StepInfo {
  double covered_fraction = 0.0;
  double ee_bits_per_joule = 0.0;  // radiated power only, no epsilon
  double jfi_load = 0.0;
  double jfi_rate = 0.0;
  double team_reward = 0.0;  // mean over agents
  std::vector<int> loads;
  std::vector<double> rates_bps;
  std::vector<double> snr_db;
  std::vector<bool> clamped;
};

struct StepOutput {
  std::vector<Observation> observations;
  std::vector<double> global_state;
  std::vector<double> rewards;
  std::vector<RewardBreakdown> breakdowns;
  StepInfo info;
  bool done = false;
};

class CoverageEnv {
 public:
  CoverageEnv(Scenario scenario, ChannelParams channel, EnvParams params);

  int num_agents() const { return config_.num_uavs; }
  int state_dim() const;
  const FleetState& state() const { return state_; }
  const EnvParams& params() const { return params_; }
  const Scenario& scenario() const { return scenario_; }
  bool done() const { return state_.t >= params_.steps_per_episode; }

  // Starts an episode from the given poses at mid-range power. Shadowing of
  // the terrestrial links is drawn once from `episode_seed`.
  StepOutput reset(std::span<const Vec3> initial_poses, std::uint64_t episode_seed);

  StepOutput step(std::span<const ActionVector> actions);

  std::vector<double> gbs_user_snr_db() const;

  RunningMinMax& ee_normalizer() { return ee_norm_; }
  RunningMinMax& pf_normalizer() { return pf_norm_; }
  const RunningMinMax& ee_normalizer() const { return ee_norm_; }
  const RunningMinMax& pf_normalizer() const { return pf_norm_; }

  bool feasible(const Vec3& p) const;

 private:
  struct LinkStats {
    network::AssociationState assoc;
    std::vector<double> snr_db;
    std::vector<double> rates;
    std::vector<bool> covered;
    std::vector<double> backhaul_db;
  };

  LinkStats evaluate_links() const;
  void fill_observations(const LinkStats& links, StepOutput& out) const;

  Scenario scenario_;
  WorldConfig config_;
  ChannelParams channel_;
  EnvParams params_;
  std::vector<Vec2> uav_users_;
  std::vector<Vec2> gbs_users_;
  std::vector<double> histogram_;
  std::vector<double> shadowing_db_;
  FleetState state_;
  RunningMinMax ee_norm_;
  RunningMinMax pf_norm_;
};

}  // namespace orchid::env
