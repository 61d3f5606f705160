#include "v2xedge/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "v2xedge/errors.hpp"

namespace v2x {

void ControlConfig::validate() const {
  if (!(eta >= 0.0)) throw ConfigError("eta must be non-negative");
  if (!(initial_step > 0.0 && initial_step <= 1.0)) {
    throw ConfigError("initial SCA step must lie in (0, 1]");
  }
  if (!(sca_tolerance > 0.0) || !(step_decay > 0.0) || !(prox_weight > 0.0)) {
    throw ConfigError("SCA tolerance, step decay and prox weight must be positive");
  }
  if (max_sca_iters < 1 || max_alt_iters < 1) throw ConfigError("iteration limits must be >= 1");
  if (!(alt_tolerance > 0.0)) throw ConfigError("alternation tolerance must be positive");
}

double SlotContext::up_rate(double p_v) const {
  return uplink_rate_lower_bound(p_v, channel_gain, radio, geom);
}

double SlotContext::down_rate(double p_r) const {
  return downlink_rate(p_r, channel_gain, radio, geom);
}

double interference_power_bound(const RadioConfig& radio, double xi1, double upsilon) {
  const double mean_per_watt = xi1 * upsilon;
  if (!(mean_per_watt > 0.0)) return std::numeric_limits<double>::infinity();
  return radio.epsilon * radio.interference_temperature / mean_per_watt;
}

double power_cap(const RadioConfig& radio, double xi1, double upsilon) {
  return std::min(interference_power_bound(radio, xi1, upsilon), radio.p_v_max);
}

SlotContext make_slot_context(std::int64_t t, const NetworkGeometry& geom, const RadioConfig& radio,
                              const ComputeConfig& compute, double slot_len, double cap) {
  SlotContext ctx;
  ctx.budget = time_budget(t, geom, slot_len);
  ctx.channel_gain = channel_gain(t, geom, geom.lane1_offset, slot_len);
  ctx.power_cap = cap;
  ctx.geom = geom;
  ctx.radio = radio;
  ctx.compute = compute;
  return ctx;
}

double slot_objective(double c_in_bits, double p_v, double p_r, const SlotState& state,
                      const SlotContext& ctx, double eta) {
  double value = -state.queue_bits(ctx.compute) * c_in_bits;
  if (eta == 0.0) return value;
  value += eta * compute_energy(c_in_bits, ctx.compute);
  if (c_in_bits > 0.0) {
    value += eta * (p_v * transfer_time(c_in_bits, ctx.up_rate(p_v)) +
                    p_r * transfer_time(state.output_bits, ctx.down_rate(p_r)));
  }
  return value;
}

double max_allowable_c_in(double p_v, double p_r, const SlotState& state, const SlotContext& ctx) {
  const double up = ctx.up_rate(p_v);
  const double down = ctx.down_rate(p_r);
  const double residual = ctx.budget - transfer_time(state.output_bits, down);
  if (!(residual > 0.0) || !(up > 0.0)) return 0.0;
  const double c = residual / (1.0 / up + ctx.compute.cycles_per_bit / ctx.compute.rsu_clock);
  return std::max(0.0, std::min(c, state.queue_bits(ctx.compute)));
}

double energy_saving_threshold(double p_v, const SlotState& state, const SlotContext& ctx) {
  const double up = ctx.up_rate(p_v);
  const double per_bit = ctx.compute.compute_energy_per_bit() + (up > 0.0 ? p_v / up : 0.0);
  return state.queue_bits(ctx.compute) / per_bit;
}

double optimal_c_in(double p_v, double p_r, const SlotState& state, const SlotContext& ctx,
                    const ControlConfig& cfg) {
  if (cfg.eta > 0.0 && cfg.eta >= energy_saving_threshold(p_v, state, ctx)) return 0.0;
  return max_allowable_c_in(p_v, p_r, state, ctx);
}

std::string_view to_string(SlotCase c) {
  switch (c) {
    case SlotCase::kIdle:
      return "idle";
    case SlotCase::kEnergyIgnored:
      return "energy-ignored";
    case SlotCase::kOffload:
      return "offload";
    case SlotCase::kEnergySaving:
      return "energy-saving";
  }
  return "unknown";
}

namespace {

__extension__ using i128 = __int128;

Latency slot_latency(double c_in_bits, double p_v, double p_r, const SlotState& state,
                     const SlotContext& ctx) {
  return latency_components(c_in_bits, c_in_bits > 0.0 ? state.output_bits : 0.0,
                            ctx.up_rate(p_v), ctx.down_rate(p_r), ctx.compute);
}

bool fits(std::int64_t tasks, double p_v, double p_r, const SlotState& state,
          const SlotContext& ctx) {
  if (tasks > state.queue_tasks) return false;
  const double bits = static_cast<double>(tasks) * ctx.compute.task_size_bits;
  return slot_latency(bits, p_v, p_r, state, ctx).total() <= ctx.budget;
}

ControlDecision idle_decision(SlotCase c) {
  ControlDecision d;
  d.slot_case = c;
  return d;
}

// Round to the nearest whole task count that keeps C2 and C3, stepping down
// when rounding up would break either.
ControlDecision finalize(double c_relaxed, double p_v, double p_r, SlotCase c,
                         const SlotState& state, const SlotContext& ctx, double eta) {
  const double s = ctx.compute.task_size_bits;
  std::int64_t n = std::llround(c_relaxed / s);
  n = std::min(n, state.queue_tasks);
  while (n > 0 && !fits(n, p_v, p_r, state, ctx)) --n;
  if (n <= 0) {
    ControlDecision d = idle_decision(c == SlotCase::kOffload || c == SlotCase::kEnergyIgnored
                                          ? SlotCase::kIdle
                                          : c);
    d.c_in_relaxed_bits = c_relaxed;
    return d;
  }

  ControlDecision d;
  d.slot_case = c;
  d.c_in_tasks = n;
  d.c_in_relaxed_bits = c_relaxed;
  d.p_v = p_v;
  d.p_r = p_r;
  const double bits = static_cast<double>(n) * s;
  d.tau = slot_latency(bits, p_v, p_r, state, ctx);
  const SlotEnergy e = slot_energy(
      EnergyInputs{bits, p_v, p_r, d.tau.upload, d.tau.upload, d.tau.download}, ctx.compute);
  d.energy_compute = compute_energy(bits, ctx.compute);
  d.energy_low = e.lower_bound;
  d.objective = slot_objective(bits, p_v, p_r, state, ctx, eta);
  return d;
}

}  // namespace

ControlDecision solve_slot(const SlotState& state, const SlotContext& ctx, const ControlConfig& cfg,
                           SolveLog* log) {
  if (state.queue_tasks <= 0 || !(ctx.budget > 0.0)) return idle_decision(SlotCase::kIdle);

  const double p_v_full = ctx.power_cap;
  const double p_r_full = ctx.radio.p_r_max;

  if (cfg.eta == 0.0) {
    const double c = max_allowable_c_in(p_v_full, p_r_full, state, ctx);
    if (log) log->objective.push_back(slot_objective(c, p_v_full, p_r_full, state, ctx, 0.0));
    return finalize(c, p_v_full, p_r_full, SlotCase::kEnergyIgnored, state, ctx, cfg.eta);
  }

  // Start the alternation from the largest load the full-power corner admits;
  // the b) step can then only keep or shrink it.
  double c = max_allowable_c_in(p_v_full, p_r_full, state, ctx);
  if (!(c > 0.0)) return idle_decision(SlotCase::kIdle);

  // p/r(p) is increasing in p, so its p -> 0 limit bounds the transmit
  // energy per bit from below. If even that bound selects case 3, every power
  // pair does and the SCA can be skipped.
  const double snr_per_watt = ctx.channel_gain * ctx.geom.serving_gain_product() /
                              (ctx.radio.interference_temperature + ctx.radio.noise_power);
  const double min_per_bit =
      ctx.compute.compute_energy_per_bit() + std::log(2.0) / (ctx.radio.bandwidth * snr_per_watt);
  if (cfg.eta >= state.queue_bits(ctx.compute) / min_per_bit) {
    if (log) log->objective.push_back(0.0);
    ControlDecision d = idle_decision(SlotCase::kEnergySaving);
    d.alternations = 0;
    return d;
  }

  PowerPair powers{p_v_full, p_r_full};
  double prev = slot_objective(c, powers.p_v, powers.p_r, state, ctx, cfg.eta);
  if (log) log->objective.push_back(prev);

  SlotCase slot_case = SlotCase::kOffload;
  int k = 0;
  for (; k < cfg.max_alt_iters; ++k) {
    // a) powers for the current load
    const ScaResult sca = sca_power_allocation(c, state, ctx, cfg, powers);
    powers = {sca.p_v, sca.p_r};
    if (log) {
      log->sca_iterations.push_back(sca.iterations);
      log->objective.push_back(slot_objective(c, powers.p_v, powers.p_r, state, ctx, cfg.eta));
    }

    // b) load for the current powers
    const double next = optimal_c_in(powers.p_v, powers.p_r, state, ctx, cfg);
    const double value = slot_objective(next, powers.p_v, powers.p_r, state, ctx, cfg.eta);
    if (log) log->objective.push_back(value);

    if (next <= 0.0) {
      slot_case = SlotCase::kEnergySaving;
      c = 0.0;
      ++k;
      break;
    }
    const bool converged = std::abs(value - prev) <= cfg.alt_tolerance * std::max(std::abs(prev), 1e-300);
    c = next;
    prev = value;
    if (converged) {
      ++k;
      break;
    }
  }

  ControlDecision d = slot_case == SlotCase::kEnergySaving
                          ? idle_decision(SlotCase::kEnergySaving)
                          : finalize(c, powers.p_v, powers.p_r, slot_case, state, ctx, cfg.eta);
  d.alternations = k;
  return d;
}

ConstraintReport check_decision(const ControlDecision& d, const SlotState& state,
                                const SlotContext& ctx) {
  ConstraintReport r;
  r.latency = d.tau.finite() && d.tau.total() <= ctx.budget;
  r.backlog = d.c_in_tasks >= 0 && d.c_in_tasks <= state.queue_tasks;
  r.box = d.p_v >= 0.0 && d.p_v <= ctx.radio.p_v_max && d.p_r >= 0.0 && d.p_r <= ctx.radio.p_r_max;
  r.power_cap = d.p_v <= ctx.power_cap;
  return r;
}

DriftReport drift_plus_penalty_diagnostic(std::span<const DriftRecord> trace, double eta,
                                          const ComputeConfig& compute) {
  DriftReport report;
  if (trace.empty()) return report;

  const double s = compute.task_size_bits;
  std::int64_t max_c = 0;
  for (const DriftRecord& r : trace) max_c = std::max(max_c, r.c_in_tasks);
  const std::int64_t dmax = compute.arrival_cap;
  // 2A in task^2 units; everything below is exact integer arithmetic.
  const i128 two_a = static_cast<i128>(max_c) * max_c + static_cast<i128>(dmax) * dmax;
  report.bound_constant = 0.5 * static_cast<double>(two_a) * s * s;

  report.drift_plus_penalty.reserve(trace.size());
  for (const DriftRecord& r : trace) {
    const std::int64_t next = std::max<std::int64_t>(r.queue_tasks - r.c_in_tasks, 0) + r.arrivals;
    const i128 q = r.queue_tasks;
    const i128 q1 = next;
    const i128 two_drift = q1 * q1 - q * q;
    const i128 two_rhs = two_a - 2 * q * (static_cast<i128>(r.c_in_tasks) - r.arrivals);
    if (two_drift > two_rhs) ++report.violations;

    const double qb = static_cast<double>(r.queue_tasks) * s;
    const double q1b = static_cast<double>(next) * s;
    report.drift_plus_penalty.push_back(0.5 * (q1b * q1b - qb * qb) + eta * r.energy_low);
  }
  return report;
}

}  // namespace v2x
