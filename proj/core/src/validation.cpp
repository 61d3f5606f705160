#include "v2xedge/validation.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "v2xedge/errors.hpp"

namespace v2x {

namespace {

// One draw of the aggregate interference at the serving RSU. Same law as
// realized_interference(sample_interferers(...)) without building the field:
// a uniform steering angle falls in the main lobe with probability
// half_width / pi.
double sample_interference(const RunConfig& cfg, double tx_power, std::mt19937_64& rng) {
  const NetworkGeometry& g = cfg.geometry;
  const double a = 0.5 * g.rsu_spacing;
  const double span = cfg.road_half_length - a;
  if (!(span > 0.0)) return 0.0;
  const double p_tx = g.vehicle_pattern.half_width() / std::numbers::pi;
  const double p_rx = g.rsu_pattern.half_width() / std::numbers::pi;
  const double h2 = g.antenna_height_diff * g.antenna_height_diff;
  const bool square_law = g.pathloss_exponent == 2.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double total = 0.0;
  for (Lane lane : {Lane::kFirst, Lane::kSecond}) {
    const double mean = g.density(lane) * 2.0 * span;
    if (mean <= 0.0) continue;
    const double off2 = g.lane_offset(lane) * g.lane_offset(lane) + h2;
    std::poisson_distribution<std::int64_t> count(mean);
    const std::int64_t n = count(rng);
    double lane_sum = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
      const double x = a + span * unit(rng);
      const double d2 = x * x + off2;
      const double path = square_law ? 1.0 / d2 : std::pow(d2, -0.5 * g.pathloss_exponent);
      const double g_tx = unit(rng) < p_tx ? g.vehicle_pattern.main_lobe_gain
                                           : g.vehicle_pattern.side_lobe_gain;
      const double g_rx =
          unit(rng) < p_rx ? g.rsu_pattern.main_lobe_gain : g.rsu_pattern.side_lobe_gain;
      lane_sum += g_tx * g_rx * path;
    }
    total += lane_sum;
  }
  return tx_power * g.freq_constant * total;
}

}  // namespace

double OutageReport::mean_relative_error() const {
  if (analytic_mean == 0.0) return mean_interference == 0.0 ? 0.0 : INFINITY;
  return std::abs(mean_interference - analytic_mean) / analytic_mean;
}

OutageReport validate_outage(const RunConfig& cfg, std::int64_t draws) {
  if (draws < 1000) throw ConfigError("at least 1000 draws are required");
  cfg.validate();
  const RunDerived d = derive(cfg);

  OutageReport r;
  r.draws = draws;
  r.tx_power = cfg.interferer_power.value_or(d.power_cap);
  r.threshold = cfg.radio.interference_temperature;
  r.epsilon = cfg.radio.epsilon;
  r.analytic_mean = r.tx_power * d.xi1 * d.upsilon;
  r.analytic_mean_truncated =
      r.tx_power * d.xi1 * upsilon_truncated(cfg.geometry, cfg.road_half_length);

  std::mt19937_64 rng(cfg.seed);
  double sum = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) {
    const double interference = sample_interference(cfg, r.tx_power, rng);
    sum += interference;
    if (interference >= r.threshold) ++r.exceed;
  }
  const double n = static_cast<double>(draws);
  r.probability = static_cast<double>(r.exceed) / n;
  r.mean_interference = sum / n;
  r.standard_error = std::sqrt(r.epsilon * (1.0 - r.epsilon) / n);
  r.pass = r.probability <= r.epsilon + 3.0 * r.standard_error;
  return r;
}

}  // namespace v2x
