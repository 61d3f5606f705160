#pragma once

// Monte Carlo check of the interference outage bound behind the vehicle
// power cap.

#include <cstdint>

#include "v2xedge/sim.hpp"

namespace v2x {

struct OutageReport {
  std::int64_t draws = 0;
  double tx_power = 0.0;      // W, used by every interferer
  double threshold = 0.0;     // W, interference temperature
  double epsilon = 0.0;
  std::int64_t exceed = 0;    // draws with I >= threshold
  double probability = 0.0;   // exceed / draws
  double standard_error = 0.0;  // sqrt(eps (1 - eps) / draws)
  double mean_interference = 0.0;       // W, sample mean
  double analytic_mean = 0.0;           // P * xi1 * upsilon, infinite road
  double analytic_mean_truncated = 0.0; // same on the sampled window
  bool pass = false;          // probability <= epsilon + 3 standard errors

  /// |sample mean - analytic| / analytic, or 0 when both vanish.
  double mean_relative_error() const;
};

/// Sample `draws` interferer fields on the configured road window. Interferers
/// transmit cfg.interferer_power when set, otherwise the vehicle power cap.
/// Throws ConfigError for draws < 1000 and DivergenceError for alpha < 2.
OutageReport validate_outage(const RunConfig& cfg, std::int64_t draws);

}  // namespace v2x
