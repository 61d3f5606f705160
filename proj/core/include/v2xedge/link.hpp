#pragma once

// Rates, latency phases and energy accounting for the vehicle-RSU pair.
// Every task quantity here is in bits; the queue converts task counts with
// ComputeConfig::task_size_bits.

#include <cstdint>

#include "v2xedge/geometry.hpp"

namespace v2x {

struct RadioConfig {
  double bandwidth = 2e9;                               // Hz
  double noise_power = thermal_noise_watts(2e9, 7.0);   // W
  double p_v_max = dbm_to_watts(25.0);                  // W
  double p_r_max = dbm_to_watts(35.0);                  // W
  double interference_temperature = 100.0 * thermal_noise_watts(2e9, 7.0);  // W
  double epsilon = 0.1;

  void validate() const;
};

struct ComputeConfig {
  double task_size_bits = 10e6;
  double cycles_per_bit = 300.0;
  double rsu_clock = 10e9;  // cycles/s
  double switched_capacitance = 1e-28;
  double arrival_rate = 8.0;  // tasks per slot
  std::int64_t arrival_cap = 50;
  std::int64_t output_bits_min = 1;
  std::int64_t output_bits_max = 1'000'000;

  /// Joules per offloaded bit spent by the RSU processor.
  double compute_energy_per_bit() const {
    return switched_capacitance * cycles_per_bit * rsu_clock * rsu_clock;
  }
  /// Seconds of RSU processing per offloaded bit.
  double compute_time_per_bit() const { return cycles_per_bit / rsu_clock; }

  void validate() const;
};

/// Shannon rate W log2(1 + p * gain / (interference + noise)), where `gain`
/// already includes channel and antenna gains. Shared by every rate below.
double shannon_rate(double power, double gain, double interference, const RadioConfig& radio);

/// Uplink rate with the serving main-lobe gains. With interference equal to
/// the interference temperature this is the lower-bound rate used for control.
double uplink_rate(double p_v, double channel_gain, double interference, const RadioConfig& radio,
                   const NetworkGeometry& geom);

double uplink_rate_lower_bound(double p_v, double channel_gain, const RadioConfig& radio,
                               const NetworkGeometry& geom);

/// Interference-free downlink rate.
double downlink_rate(double p_r, double channel_gain, const RadioConfig& radio,
                     const NetworkGeometry& geom);

struct Latency {
  double upload = 0.0;    // tau_1
  double compute = 0.0;   // tau_2
  double download = 0.0;  // tau_3

  double total() const { return upload + compute + download; }
  bool finite() const;
};

/// Transfer time of `bits` at `rate`; +inf when bits > 0 and the rate is zero.
double transfer_time(double bits, double rate);

Latency latency_components(double c_in_bits, double c_out_bits, double up_rate, double down_rate,
                           const ComputeConfig& compute);

/// RSU processing energy rho * C_in * theta * f_R^2.
double compute_energy(double c_in_bits, const ComputeConfig& compute);

struct SlotEnergy {
  double total = 0.0;        // with the realised uplink time
  double lower_bound = 0.0;  // with the worst-case (interference = temperature) uplink time
};

/// Per-slot energy inputs. `upload_time_worst_case` is tau_1 at the lower-bound rate.
struct EnergyInputs {
  double c_in_bits = 0.0;
  double p_v = 0.0;
  double p_r = 0.0;
  double upload_time = 0.0;
  double upload_time_worst_case = 0.0;
  double download_time = 0.0;
};

SlotEnergy slot_energy(const EnergyInputs& in, const ComputeConfig& compute);

}  // namespace v2x
