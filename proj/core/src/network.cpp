#include "orchid/network.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "orchid/channel.hpp"

namespace orchid::network {

std::vector<std::vector<std::uint8_t>> AssociationState::matrix() const {
  std::vector<std::vector<std::uint8_t>> alpha(static_cast<std::size_t>(num_uavs),
                                               std::vector<std::uint8_t>(serving.size(), 0));
  for (std::size_t m = 0; m < serving.size(); ++m) {
    if (serving[m] >= 0) alpha[static_cast<std::size_t>(serving[m])][m] = 1;
  }
  return alpha;
}

std::vector<double> rssi_dbm(std::span<const Vec3> uav_positions,
                             std::span<const double> tx_powers_dbm,
                             std::span<const Vec2> users, const ChannelParams& params) {
  if (uav_positions.size() != tx_powers_dbm.size()) {
    throw std::invalid_argument("rssi_dbm: positions and powers differ in length");
  }
  const std::size_t n_uav = uav_positions.size();
  std::vector<double> out(n_uav * users.size());
  const double gains = params.antenna_gain_tx_db + params.antenna_gain_rx_db;
  for (std::size_t n = 0; n < n_uav; ++n) {
    for (std::size_t m = 0; m < users.size(); ++m) {
      out[n * users.size() + m] =
          tx_powers_dbm[n] + gains - channel::a2g_pathloss_db(uav_positions[n], users[m], params);
    }
  }
  return out;
}

AssociationState associate_max_rssi(std::span<const Vec3> uav_positions,
                                    std::span<const double> tx_powers_dbm,
                                    std::span<const Vec2> users, const ChannelParams& params) {
  if (uav_positions.empty()) throw std::invalid_argument("associate_max_rssi: no UAVs");
  const auto rssi = rssi_dbm(uav_positions, tx_powers_dbm, users, params);
  const std::size_t n_uav = uav_positions.size();

  AssociationState state;
  state.num_uavs = static_cast<int>(n_uav);
  state.serving.assign(users.size(), -1);
  state.loads.assign(n_uav, 0);
  for (std::size_t m = 0; m < users.size(); ++m) {
    int best = 0;
    double best_rssi = rssi[m];
    for (std::size_t n = 1; n < n_uav; ++n) {
      const double r = rssi[n * users.size() + m];
      if (r > best_rssi) {
        best_rssi = r;
        best = static_cast<int>(n);
      }
    }
    state.serving[m] = best;
    ++state.loads[static_cast<std::size_t>(best)];
  }
  return state;
}

std::vector<double> serving_snr_db(const AssociationState& assoc,
                                   std::span<const Vec3> uav_positions,
                                   std::span<const double> tx_powers_dbm,
                                   std::span<const Vec2> users, const ChannelParams& params,
                                   double bandwidth_hz) {
  std::vector<double> out(users.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t m = 0; m < users.size(); ++m) {
    const int n = assoc.serving[m];
    if (n < 0) continue;
    const auto un = static_cast<std::size_t>(n);
    const double loss = channel::a2g_pathloss_db(uav_positions[un], users[m], params);
    out[m] = channel::snr_db(tx_powers_dbm[un], loss, params, bandwidth_hz);
  }
  return out;
}

std::vector<double> user_rates(const AssociationState& assoc, std::span<const double> snr_db,
                               double bandwidth_hz) {
  std::vector<double> rates(assoc.serving.size(), 0.0);
  for (std::size_t m = 0; m < rates.size(); ++m) {
    const int n = assoc.serving[m];
    if (n < 0) continue;
    const int load = assoc.loads[static_cast<std::size_t>(n)];
    if (load <= 0) continue;
    rates[m] = bandwidth_hz / load * std::log2(1.0 + channel::db_to_linear(snr_db[m]));
  }
  return rates;
}

std::vector<double> user_rates(const AssociationState& assoc,
                               std::span<const Vec3> uav_positions,
                               std::span<const double> tx_powers_dbm,
                               std::span<const Vec2> users, const ChannelParams& params,
                               double bandwidth_hz) {
  const auto snr = serving_snr_db(assoc, uav_positions, tx_powers_dbm, users, params, bandwidth_hz);
  return user_rates(assoc, snr, bandwidth_hz);
}

std::vector<bool> coverage_mask(std::span<const double> snr_db, double threshold_db) {
  std::vector<bool> mask(snr_db.size());
  for (std::size_t m = 0; m < snr_db.size(); ++m) mask[m] = snr_db[m] >= threshold_db;
  return mask;
}

std::vector<int> served_set(std::span<const double> rates) {
  std::vector<int> out;
  for (std::size_t m = 0; m < rates.size(); ++m) {
    if (rates[m] > 0.0) out.push_back(static_cast<int>(m));
  }
  return out;
}

}  // namespace orchid::network
