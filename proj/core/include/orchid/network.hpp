#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "orchid/config.hpp"
#include "orchid/geometry.hpp"

namespace orchid::network {

// User-to-UAV association over the UAV-tier users. `serving[m]` is the UAV
// index serving user m, or -1 when unassociated.
struct AssociationState {
  int num_uavs = 0;
  std::vector<int> serving;
  std::vector<int> loads;  // K_n, row sums of the association matrix

  bool associated(int uav, int user) const {
    return serving[static_cast<std::size_t>(user)] == uav;
  }
  // Dense N x M binary matrix alpha_{n,m}.
  std::vector<std::vector<std::uint8_t>> matrix() const;
};

// Received signal strength in dBm of every (uav, user) pair, row-major N x M.
std::vector<double> rssi_dbm(std::span<const Vec3> uav_positions,
                             std::span<const double> tx_powers_dbm,
                             std::span<const Vec2> users, const ChannelParams& params);

// Each user picks the UAV with the strongest received signal; ties go to
// the lowest UAV index. Every user is associated.
AssociationState associate_max_rssi(std::span<const Vec3> uav_positions,
                                    std::span<const double> tx_powers_dbm,
                                    std::span<const Vec2> users, const ChannelParams& params);

// SNR in dB of each user's serving link; -inf for unassociated users.
std::vector<double> serving_snr_db(const AssociationState& assoc,
                                   std::span<const Vec3> uav_positions,
                                   std::span<const double> tx_powers_dbm,
                                   std::span<const Vec2> users, const ChannelParams& params,
                                   double bandwidth_hz);

// Equal sharing of the sub-band: R_m = (B / K_n) log2(1 + snr).
std::vector<double> user_rates(const AssociationState& assoc, std::span<const double> snr_db,
                               double bandwidth_hz);

std::vector<double> user_rates(const AssociationState& assoc,
                               std::span<const Vec3> uav_positions,
                               std::span<const double> tx_powers_dbm,
                               std::span<const Vec2> users, const ChannelParams& params,
                               double bandwidth_hz);

// A user is covered iff its serving-link SNR is at least the threshold.
std::vector<bool> coverage_mask(std::span<const double> snr_db, double threshold_db);

// Indices of users with a strictly positive rate.
std::vector<int> served_set(std::span<const double> rates);

}  // namespace orchid::network
