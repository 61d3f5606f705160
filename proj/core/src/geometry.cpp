#include "v2xedge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "v2xedge/errors.hpp"

namespace v2x {

namespace {

double wrap_angle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

void require_convergent(const NetworkGeometry& geom) {
  if (!(geom.pathloss_exponent >= 2.0)) {
    throw DivergenceError("interference integral diverges for pathloss exponent " +
                          std::to_string(geom.pathloss_exponent) + " < 2");
  }
}

double pathloss_density(double x, double c2, double alpha) {
  const double s = x * x + c2;
  return alpha == 2.0 ? 1.0 / s : std::pow(s, -0.5 * alpha);
}

}  // namespace

double AntennaPattern::alignment_probability() const {
  return std::min(1.0, 2.0 * half_width() / (2.0 * kPi));
}

double AntennaPattern::mean_gain() const {
  const double p = alignment_probability();
  return p * main_lobe_gain + (1.0 - p) * side_lobe_gain;
}

void AntennaPattern::validate() const {
  if (!(side_lobe_gain > 0.0) || !(main_lobe_gain >= side_lobe_gain)) {
    throw ConfigError("antenna pattern requires main_lobe_gain >= side_lobe_gain > 0");
  }
  if (!(beamwidth > 0.0) || !(2.0 * half_width() < 2.0 * kPi)) {
    throw ConfigError("antenna beamwidth must lie in (0, 2*pi)");
  }
}

AntennaPattern make_pattern(double main_db, double side_db, double beamwidth_deg,
                            BeamwidthConvention convention) {
  const AntennaPattern p{db_to_linear(main_db), db_to_linear(side_db), deg_to_rad(beamwidth_deg),
                         convention};
  p.validate();
  return p;
}

void NetworkGeometry::validate() const {
  if (!(rsu_spacing > 0.0) || !(lane1_offset > 0.0) || !(lane2_offset > 0.0) ||
      !(antenna_height_diff > 0.0) || !(vehicle_speed > 0.0)) {
    throw ConfigError("geometry distances and vehicle speed must be strictly positive");
  }
  if (!(freq_constant > 0.0)) throw ConfigError("frequency constant must be positive");
  if (!(lane_densities[0] >= 0.0) || !(lane_densities[1] >= 0.0)) {
    throw ConfigError("lane densities must be non-negative");
  }
  vehicle_pattern.validate();
  rsu_pattern.validate();
}

double antenna_gain(const AntennaPattern& pattern, double steering_angle) {
  return std::abs(wrap_angle(steering_angle)) < pattern.half_width() ? pattern.main_lobe_gain
                                                                      : pattern.side_lobe_gain;
}

double horizontal_distance_at(double travelled, const NetworkGeometry& geom) {
  const double half = 0.5 * geom.rsu_spacing;
  const double m = std::fmod(travelled, half);
  const auto k = static_cast<std::int64_t>(std::floor(travelled / half));
  return (k % 2 == 0) ? half - m : m;
}

double horizontal_distance(std::int64_t t, const NetworkGeometry& geom, double slot_len) {
  return horizontal_distance_at(geom.vehicle_speed * static_cast<double>(t) * slot_len, geom);
}

double channel_gain_at(double horizontal, const NetworkGeometry& geom, double lane_offset) {
  const double d2 = horizontal * horizontal + lane_offset * lane_offset +
                    geom.antenna_height_diff * geom.antenna_height_diff;
  return geom.freq_constant * std::pow(d2, -0.5 * geom.pathloss_exponent);
}

double channel_gain(std::int64_t t, const NetworkGeometry& geom, double lane_offset,
                    double slot_len) {
  return channel_gain_at(horizontal_distance(t, geom, slot_len), geom, lane_offset);
}

double time_budget(std::int64_t t, const NetworkGeometry& geom, double slot_len) {
  const double travelled = geom.vehicle_speed * static_cast<double>(t) * slot_len;
  return (geom.rsu_spacing - std::fmod(travelled, geom.rsu_spacing)) / geom.vehicle_speed;
}

double upsilon(const NetworkGeometry& geom) {
  require_convergent(geom);
  if (geom.pathloss_exponent != 2.0) return upsilon_quadrature(geom);

  const double a = 0.5 * geom.rsu_spacing;
  double total = 0.0;
  for (Lane lane : {Lane::kFirst, Lane::kSecond}) {
    const double r = geom.lane_offset(lane);
    const double c = std::sqrt(r * r + geom.antenna_height_diff * geom.antenna_height_diff);
    // int_a^inf dx / (x^2 + c^2) = (pi/2 - atan(a/c)) / c = atan(c/a) / c
    total += 2.0 * geom.density(lane) * std::atan(c / a) / c;
  }
  return geom.freq_constant * total;
}

double upsilon_quadrature(const NetworkGeometry& geom) {
  require_convergent(geom);
  const double a = 0.5 * geom.rsu_spacing;
  const double alpha = geom.pathloss_exponent;
  boost::math::quadrature::exp_sinh<double> integrator;
  const double tol = std::sqrt(std::numeric_limits<double>::epsilon()) * 1e-5;

  double total = 0.0;
  for (Lane lane : {Lane::kFirst, Lane::kSecond}) {
    if (geom.density(lane) == 0.0) continue;
    const double r = geom.lane_offset(lane);
    const double c2 = r * r + geom.antenna_height_diff * geom.antenna_height_diff;
    // Shift to [0, inf) so the integrator sees the endpoint at the origin.
    auto f = [&](double u) { return pathloss_density(a + u, c2, alpha); };
    const double integral = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                                 tol);
    total += 2.0 * geom.density(lane) * integral;
  }
  return geom.freq_constant * total;
}

double upsilon_truncated(const NetworkGeometry& geom, double half_length) {
  require_convergent(geom);
  const double a = 0.5 * geom.rsu_spacing;
  if (!(half_length > a)) return 0.0;
  const double alpha = geom.pathloss_exponent;

  double total = 0.0;
  for (Lane lane : {Lane::kFirst, Lane::kSecond}) {
    if (geom.density(lane) == 0.0) continue;
    const double r = geom.lane_offset(lane);
    const double c2 = r * r + geom.antenna_height_diff * geom.antenna_height_diff;
    double integral = 0.0;
    if (alpha == 2.0) {
      const double c = std::sqrt(c2);
      integral = std::atan(c * (half_length - a) / (c2 + a * half_length)) / c;
    } else {
      auto f = [&](double u) { return pathloss_density(a + u, c2, alpha); };
      // Tail beyond half_length is subtracted from the full integral.
      boost::math::quadrature::exp_sinh<double> integrator;
      const double inf = std::numeric_limits<double>::infinity();
      const double full = integrator.integrate(f, 0.0, inf, 1e-13);
      auto g = [&](double u) { return pathloss_density(half_length + u, c2, alpha); };
      integral = full - integrator.integrate(g, 0.0, inf, 1e-13);
    }
    total += 2.0 * geom.density(lane) * integral;
  }
  return geom.freq_constant * total;
}

double expected_gain_product(const NetworkGeometry& geom) {
  return geom.vehicle_pattern.mean_gain() * geom.rsu_pattern.mean_gain();
}

std::size_t InterfererField::count(Lane lane) const {
  return static_cast<std::size_t>(std::count_if(
      interferers.begin(), interferers.end(), [lane](const Interferer& i) { return i.lane == lane; }));
}

InterfererField sample_interferers(const NetworkGeometry& geom, double road_half_length,
                                   std::mt19937_64& rng, double tx_power) {
  const double a = 0.5 * geom.rsu_spacing;
  InterfererField field;
  if (!(road_half_length > a)) return field;

  std::uniform_real_distribution<double> position(a, road_half_length);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::bernoulli_distribution side(0.5);

  for (Lane lane : {Lane::kFirst, Lane::kSecond}) {
    const double mean = geom.density(lane) * 2.0 * (road_half_length - a);
    if (mean <= 0.0) continue;
    std::poisson_distribution<std::int64_t> count(mean);
    const std::int64_t n = count(rng);
    field.interferers.reserve(field.interferers.size() + static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
      Interferer it;
      it.x = side(rng) ? position(rng) : -position(rng);
      it.lane = lane;
      it.power = tx_power;
      const double g_tx = antenna_gain(geom.vehicle_pattern, angle(rng));
      const double g_rx = antenna_gain(geom.rsu_pattern, angle(rng));
      it.gain = g_tx * g_rx;
      field.interferers.push_back(it);
    }
  }
  return field;
}

InterfererField sample_interferers(const NetworkGeometry& geom, double road_half_length,
                                   std::uint64_t seed, double tx_power) {
  std::mt19937_64 rng(seed);
  return sample_interferers(geom, road_half_length, rng, tx_power);
}

double realized_interference(const InterfererField& field, const NetworkGeometry& geom) {
  double total = 0.0;
  for (const Interferer& i : field.interferers) {
    total += i.power * i.gain * channel_gain_at(i.x, geom, geom.lane_offset(i.lane));
  }
  return total;
}

}  // namespace v2x
