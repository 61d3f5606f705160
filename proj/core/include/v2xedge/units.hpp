#pragma once

#include <cmath>
#include <numbers>

namespace v2x {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 3.0e8;  // m/s, as used for the pathloss constant

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double kmh_to_ms(double kmh) { return kmh / 3.6; }
inline double ms_to_kmh(double ms) { return ms * 3.6; }
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Free-space constant (c / (4 pi f))^2 for carrier frequency f in Hz.
inline double free_space_constant(double carrier_hz) {
  const double k = kSpeedOfLight / (4.0 * kPi * carrier_hz);
  return k * k;
}

// Thermal noise over `bandwidth_hz` with the given receiver noise figure:
// -174 dBm/Hz + 10 log10(B) + NF, returned in watts.
inline double thermal_noise_watts(double bandwidth_hz, double noise_figure_db) {
  return dbm_to_watts(-174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

}  // namespace v2x
