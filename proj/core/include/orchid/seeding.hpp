#pragma once

#include <cstdint>

namespace orchid {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent sub-streams of a base seed, so that each consumer of
// randomness can be reproduced on its own.
enum class Stream : std::uint64_t {
  kPhase1 = 1,
  kPolicyInit = 2,
  kSampling = 3,
  kEpisode = 4,
  kRandomPoses = 5,
  kBaselineEe = 6,
  kEvaluation = 7,
};

constexpr std::uint64_t derive_seed(std::uint64_t base, Stream stream, std::uint64_t index = 0) {
  return mix64(mix64(base ^ mix64(static_cast<std::uint64_t>(stream))) + index);
}

}  // namespace orchid
