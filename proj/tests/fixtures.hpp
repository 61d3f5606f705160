#pragma once

#include <random>

#include "v2xedge/control.hpp"
#include "v2xedge/queue.hpp"
#include "v2xedge/sim.hpp"

namespace fixtures {

struct Instance {
  v2x::SlotState state;
  v2x::SlotContext ctx;
  double c_in_bits = 0.0;  // a load the full-power corner can carry with slack
};

// Table I link with a random slot position, backlog, output size and
// interference temperature.
inline Instance random_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  v2x::RunConfig cfg;
  cfg.radio.interference_temperature = cfg.radio.noise_power * std::pow(10.0, 3.0 * u(rng));
  const v2x::RunDerived d = v2x::derive(cfg);

  Instance in;
  for (;;) {
    const auto t = static_cast<std::int64_t>(u(rng) * 2000.0);
    in.ctx = v2x::make_slot_context(t, cfg.geometry, cfg.radio, cfg.compute, 1.0, d.power_cap);
    if (in.ctx.budget > 0.4) break;
  }
  in.state.t = 1;
  in.state.queue_tasks = 1 + static_cast<std::int64_t>(u(rng) * 40.0);
  in.state.output_bits = std::floor(1.0 + u(rng) * 1e6);
  const double cmax = v2x::max_allowable_c_in(in.ctx.power_cap, in.ctx.radio.p_r_max, in.state, in.ctx);
  in.c_in_bits = cmax * (0.05 + 0.9 * u(rng));
  return in;
}

}  // namespace fixtures
