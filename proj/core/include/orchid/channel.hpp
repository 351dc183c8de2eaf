#pragma once

#include <cmath>

#include "orchid/config.hpp"
#include "orchid/geometry.hpp"

namespace orchid::channel {

// Elevation of the UAV as seen from a ground user, in degrees within (0, 90].
// Throws std::domain_error when the two points coincide.
double elevation_angle_deg(const Vec3& uav, const Vec2& user);

// Sigmoid line-of-sight probability for an elevation angle in degrees.
double los_probability(double theta_deg, const ChannelParams& params);

// Free-space loss 20log10(d) + 20log10(fc) + 20log10(4*pi/c).
double free_space_pathloss_db(double distance_m, const ChannelParams& params);

// LoS/NLoS-averaged air-to-ground path loss in dB.
double a2g_pathloss_db(const Vec3& uav, const Vec2& user, const ChannelParams& params);

// Same geometry with line of sight forced (used for the GBS backhaul link).
double a2g_los_pathloss_db(const Vec3& a, const Vec3& b, const ChannelParams& params);

// Terrestrial log-distance loss with a caller-supplied shadowing draw.
double gbs_pathloss_db(const Vec3& gbs, const Vec2& user, double shadow_db,
                       const ChannelParams& params);

double noise_power_dbm(const ChannelParams& params, double bandwidth_hz);

double snr_db(double tx_power_dbm, double pathloss_db, const ChannelParams& params,
              double bandwidth_hz);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

inline double snr_linear(double tx_power_dbm, double pathloss_db, const ChannelParams& params,
                         double bandwidth_hz) {
  return db_to_linear(snr_db(tx_power_dbm, pathloss_db, params, bandwidth_hz));
}

}  // namespace orchid::channel
