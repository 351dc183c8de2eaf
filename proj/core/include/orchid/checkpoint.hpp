#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orchid/adam.hpp"
#include "orchid/config.hpp"
#include "orchid/policy.hpp"
#include "orchid/rnf.hpp"
#include "orchid/rollout.hpp"

namespace orchid {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NormalizerState {
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t count = 0;
};

// Everything needed to continue a training run bit-identically.
struct Checkpoint {
  RunConfig config;
  std::uint64_t seed = 0;
  int episode = 0;  // episodes completed
  std::string scenario_fingerprint;
  std::vector<Vec3> initial_poses;
  double baseline_ee = 0.0;

  learn::Actor actor;
  learn::Critic critic;
  learn::OptimizerState actor_opt;
  learn::OptimizerState critic_opt;
  std::string sampling_rng;  // std::mt19937_64 stream state
  rnf::RnfController rnf;
  NormalizerState ee_norm;
  NormalizerState pf_norm;
  std::vector<learn::EpisodeRollout> pending;  // rollouts not yet consumed by an update
};

// Layout: "ORCHIDCK", u32 version, u64 manifest length, JSON manifest, then
// the tensors it lists as raw little-endian doubles, column-major.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace orchid
