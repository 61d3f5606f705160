#include "v2xedge/link.hpp"

#include <cmath>
#include <limits>

#include "v2xedge/errors.hpp"

namespace v2x {

void RadioConfig::validate() const {
  if (!(bandwidth > 0.0) || !(noise_power > 0.0) || !(p_v_max > 0.0) || !(p_r_max > 0.0) ||
      !(interference_temperature > 0.0)) {
    throw ConfigError("radio bandwidth, noise, power limits and interference temperature must be positive");
  }
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
}

void ComputeConfig::validate() const {
  if (!(task_size_bits > 0.0) || !(cycles_per_bit > 0.0) || !(rsu_clock > 0.0) ||
      !(switched_capacitance > 0.0)) {
    throw ConfigError("task size, cycles per bit, RSU clock and switched capacitance must be positive");
  }
  if (!(arrival_rate >= 0.0)) throw ConfigError("arrival rate must be non-negative");
  if (arrival_cap < 1) throw ConfigError("arrival cap must be at least 1");
  if (output_bits_min < 0 || output_bits_min > output_bits_max) {
    throw ConfigError("output size range must satisfy 0 <= min <= max");
  }
}

double shannon_rate(double power, double gain, double interference, const RadioConfig& radio) {
  return radio.bandwidth * std::log2(1.0 + power * gain / (interference + radio.noise_power));
}

double uplink_rate(double p_v, double channel_gain, double interference, const RadioConfig& radio,
                   const NetworkGeometry& geom) {
  return shannon_rate(p_v, channel_gain * geom.serving_gain_product(), interference, radio);
}

double uplink_rate_lower_bound(double p_v, double channel_gain, const RadioConfig& radio,
                               const NetworkGeometry& geom) {
  return uplink_rate(p_v, channel_gain, radio.interference_temperature, radio, geom);
}

double downlink_rate(double p_r, double channel_gain, const RadioConfig& radio,
                     const NetworkGeometry& geom) {
  return shannon_rate(p_r, channel_gain * geom.serving_gain_product(), 0.0, radio);
}

bool Latency::finite() const {
  return std::isfinite(upload) && std::isfinite(compute) && std::isfinite(download);
}

double transfer_time(double bits, double rate) {
  if (bits <= 0.0) return 0.0;
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return bits / rate;
}

Latency latency_components(double c_in_bits, double c_out_bits, double up_rate, double down_rate,
                           const ComputeConfig& compute) {
  Latency tau;
  tau.upload = transfer_time(c_in_bits, up_rate);
  tau.compute = compute.cycles_per_bit * c_in_bits / compute.rsu_clock;
  tau.download = transfer_time(c_out_bits, down_rate);
  return tau;
}

double compute_energy(double c_in_bits, const ComputeConfig& compute) {
  return compute.switched_capacitance * c_in_bits * compute.cycles_per_bit * compute.rsu_clock *
         compute.rsu_clock;
}

SlotEnergy slot_energy(const EnergyInputs& in, const ComputeConfig& compute) {
  const double e_c = compute_energy(in.c_in_bits, compute);
  const double download = in.p_r * in.download_time;
  return SlotEnergy{e_c + in.p_v * in.upload_time + download,
                    e_c + in.p_v * in.upload_time_worst_case + download};
}

}  // namespace v2x
