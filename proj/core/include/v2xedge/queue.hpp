#pragma once

#include <cstdint>
#include <random>

#include "v2xedge/link.hpp"

namespace v2x {

/// Observable state of the typical vehicle at the start of slot `t`.
struct SlotState {
  std::int64_t t = 0;
  std::int64_t queue_tasks = 0;  // Q_o(t)
  std::int64_t arrivals = 0;     // D_o(t), joins the queue after this slot's service
  double output_bits = 0.0;      // C_out(t)

  double queue_bits(const ComputeConfig& compute) const {
    return static_cast<double>(queue_tasks) * compute.task_size_bits;
  }
};

/// min(Poisson(arrival_rate), arrival_cap); zero when the rate is zero.
std::int64_t sample_arrivals(const ComputeConfig& compute, std::mt19937_64& rng);

/// Integer output size, uniform on [output_bits_min, output_bits_max].
double sample_output_bits(const ComputeConfig& compute, std::mt19937_64& rng);

/// Q(t+1) = max(Q(t) - C_in(t), 0) + D(t).
std::int64_t advance_queue(const SlotState& state, std::int64_t c_in_tasks);

}  // namespace v2x
