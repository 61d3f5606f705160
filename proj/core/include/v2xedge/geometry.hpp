#pragma once

// Road and RSU layout, mobility-driven LoS channel gains, sectored antenna
// patterns and the Poisson interferer field seen by the serving RSU.
//
// The typical vehicle drives on lane 1 at constant speed past RSUs spaced
// `rsu_spacing` apart. Interfering vehicles on both lanes form independent
// 1-D Poisson processes; only those farther than half a cell from the
// serving RSU contribute uplink interference.

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "v2xedge/units.hpp"

namespace v2x {

/// Whether a configured beamwidth is the full main-lobe width or its half-angle.
enum class BeamwidthConvention { kTotal, kHalf };

/// Two-level sectored pattern: main lobe inside the beam, side lobe elsewhere.
struct AntennaPattern {
  double main_lobe_gain = 1.0;  // linear
  double side_lobe_gain = 1.0;  // linear
  double beamwidth = kPi;       // radians
  BeamwidthConvention convention = BeamwidthConvention::kTotal;

  /// Angle (radians) below which the main lobe applies.
  double half_width() const {
    return convention == BeamwidthConvention::kTotal ? 0.5 * beamwidth : beamwidth;
  }

  /// Probability that a uniformly random steering angle lands in the main lobe.
  double alignment_probability() const;

  /// E[G] under uniform steering.
  double mean_gain() const;

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

/// Build a pattern from dB gains and a beamwidth in degrees.
AntennaPattern make_pattern(double main_db, double side_db, double beamwidth_deg,
                            BeamwidthConvention convention = BeamwidthConvention::kTotal);

enum class Lane : std::uint8_t { kFirst = 0, kSecond = 1 };

struct NetworkGeometry {
  double rsu_spacing = 50.0;          // m
  double lane1_offset = 7.0;          // m, typical vehicle to RSU (perpendicular)
  double lane2_offset = 10.0;         // m
  double antenna_height_diff = 6.0;   // m
  double vehicle_speed = 50.0 / 3.6;  // m/s
  double pathloss_exponent = 2.0;
  double freq_constant = free_space_constant(60e9);
  std::array<double, 2> lane_densities{0.1, 0.1};  // vehicles per metre
  AntennaPattern vehicle_pattern = make_pattern(3.0, -3.0, 90.0);
  AntennaPattern rsu_pattern = make_pattern(15.0, -15.0, 9.0);

  double lane_offset(Lane lane) const {
    return lane == Lane::kFirst ? lane1_offset : lane2_offset;
  }
  double density(Lane lane) const { return lane_densities[static_cast<std::size_t>(lane)]; }

  /// Product of main-lobe gains on the serving link.
  double serving_gain_product() const {
    return vehicle_pattern.main_lobe_gain * rsu_pattern.main_lobe_gain;
  }

  void validate() const;
};

/// Sectored gain at `steering_angle`; the angle is wrapped to (-pi, pi] first.
double antenna_gain(const AntennaPattern& pattern, double steering_angle);

/// Horizontal vehicle-to-RSU distance at the start of slot `t`, in [0, spacing/2].
double horizontal_distance(std::int64_t t, const NetworkGeometry& geom, double slot_len);

/// Horizontal distance after travelling `travelled` metres from a cell boundary.
double horizontal_distance_at(double travelled, const NetworkGeometry& geom);

/// LoS gain beta * (l^2 + r^2 + h^2)^(-alpha/2) at horizontal distance `horizontal`.
double channel_gain_at(double horizontal, const NetworkGeometry& geom, double lane_offset);

double channel_gain(std::int64_t t, const NetworkGeometry& geom, double lane_offset,
                    double slot_len);

/// Remaining dwell time in the current cell at the start of slot `t`, in (0, spacing/speed].
double time_budget(std::int64_t t, const NetworkGeometry& geom, double slot_len);

/// Density-weighted pathloss integral over interferers beyond half a cell,
/// summed over both lanes. Closed form for exponent 2, quadrature otherwise.
/// Throws DivergenceError when the exponent is below 2.
double upsilon(const NetworkGeometry& geom);

/// Same integral evaluated by adaptive double-exponential quadrature for any
/// exponent >= 2 (relative tolerance ~1e-12).
double upsilon_quadrature(const NetworkGeometry& geom);

/// The integral restricted to |x| in [spacing/2, half_length]; this is the
/// exact mean interference factor of a field sampled on a finite road.
double upsilon_truncated(const NetworkGeometry& geom, double half_length);

/// E[G_vehicle * G_rsu] for independent, uniformly steered interferer beams.
double expected_gain_product(const NetworkGeometry& geom);

struct Interferer {
  double x = 0.0;  // signed horizontal offset from the serving RSU, m
  Lane lane = Lane::kFirst;
  double power = 0.0;  // W
  double gain = 0.0;   // linear tx * rx antenna gain
};

struct InterfererField {
  std::vector<Interferer> interferers;

  std::size_t count(Lane lane) const;
  bool empty() const { return interferers.empty(); }
};

/// Draw one Poisson interferer field on |x| in [spacing/2, road_half_length].
/// Every interferer transmits `tx_power` watts.
InterfererField sample_interferers(const NetworkGeometry& geom, double road_half_length,
                                   std::uint64_t seed, double tx_power);

InterfererField sample_interferers(const NetworkGeometry& geom, double road_half_length,
                                   std::mt19937_64& rng, double tx_power);

/// Aggregate uplink interference at the serving RSU, in watts.
double realized_interference(const InterfererField& field, const NetworkGeometry& geom);

}  // namespace v2x
