#include "orchid/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace orchid::channel {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

void require_positive_distance(double d) {
  if (!(d > 0.0)) throw std::domain_error("channel: zero link distance");
}

}  // namespace

double elevation_angle_deg(const Vec3& uav, const Vec2& user) {
  const double d = distance(uav, user);
  require_positive_distance(d);
  return kRadToDeg * std::asin(std::clamp(uav.z / d, -1.0, 1.0));
}

double los_probability(double theta_deg, const ChannelParams& p) {
  return 1.0 / (1.0 + p.s_curve_a * std::exp(-p.s_curve_b * (theta_deg - p.s_curve_a)));
}

double free_space_pathloss_db(double distance_m, const ChannelParams& p) {
  require_positive_distance(distance_m);
  return 20.0 * std::log10(distance_m) + 20.0 * std::log10(p.carrier_hz) +
         20.0 * std::log10(4.0 * std::numbers::pi / p.lightspeed_mps);
}

double a2g_pathloss_db(const Vec3& uav, const Vec2& user, const ChannelParams& p) {
  const double d = distance(uav, user);
  require_positive_distance(d);
  const double fspl = free_space_pathloss_db(d, p);
  const double p_los = los_probability(kRadToDeg * std::asin(std::clamp(uav.z / d, -1.0, 1.0)), p);
  return p_los * (fspl + p.eta_los_db) + (1.0 - p_los) * (fspl + p.eta_nlos_db);
}

double a2g_los_pathloss_db(const Vec3& a, const Vec3& b, const ChannelParams& p) {
  return free_space_pathloss_db(distance(a, b), p) + p.eta_los_db;
}

double gbs_pathloss_db(const Vec3& gbs, const Vec2& user, double shadow_db,
                       const ChannelParams& p) {
  const double d = distance(gbs, user);
  require_positive_distance(d);
  return 20.0 * std::log10(4.0 * std::numbers::pi * p.carrier_hz / p.lightspeed_mps) +
         10.0 * p.pathloss_exponent * std::log10(d) + shadow_db;
}

double noise_power_dbm(const ChannelParams& p, double bandwidth_hz) {
  return p.noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz);
}

double snr_db(double tx_power_dbm, double pathloss_db, const ChannelParams& p,
              double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("snr_db: bandwidth must be positive");
  return tx_power_dbm + p.antenna_gain_tx_db + p.antenna_gain_rx_db - pathloss_db -
         noise_power_dbm(p, bandwidth_hz);
}

}  // namespace orchid::channel
