#include "v2xedge/queue.hpp"

#include <algorithm>
#include <stdexcept>

namespace v2x {

std::int64_t sample_arrivals(const ComputeConfig& compute, std::mt19937_64& rng) {
  if (compute.arrival_rate <= 0.0) return 0;
  std::poisson_distribution<std::int64_t> poisson(compute.arrival_rate);
  return std::min(poisson(rng), compute.arrival_cap);
}

double sample_output_bits(const ComputeConfig& compute, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> size(compute.output_bits_min,
                                                   compute.output_bits_max);
  return static_cast<double>(size(rng));
}

std::int64_t advance_queue(const SlotState& state, std::int64_t c_in_tasks) {
  if (c_in_tasks < 0) throw std::invalid_argument("offloaded task count must be non-negative");
  return std::max<std::int64_t>(state.queue_tasks - c_in_tasks, 0) + state.arrivals;
}

}  // namespace v2x
