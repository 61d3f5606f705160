#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "v2xedge/control.hpp"
#include "v2xedge/errors.hpp"
#include "v2xedge/sim.hpp"

using namespace v2x;

namespace {

SlotContext context_at(std::int64_t t) {
  RunConfig cfg;
  const RunDerived d = derive(cfg);
  return make_slot_context(t, cfg.geometry, cfg.radio, cfg.compute, 1.0, d.power_cap);
}

// Slot energy with every term spelled out, no library helpers.
double straight_objective(double c, double pv, double pr, double q_tasks, double cout, double gain,
                          double eta) {
  const double s = 1e7, theta = 300.0, f = 1e10, rho = 1e-28, w = 2e9;
  const double sigma = oracle::noise_watts(2e9, 7.0);
  const double g = gain * std::pow(10.0, 0.3) * std::pow(10.0, 1.5);
  const double up = w * std::log2(1.0 + pv * g / (101.0 * sigma));
  const double down = w * std::log2(1.0 + pr * g / sigma);
  return -q_tasks * s * c + eta * rho * c * theta * f * f + eta * (pv * c / up + pr * cout / down);
}

}  // namespace

TEST(PowerCap, TableIValue) {
  RadioConfig r;
  const double cap = power_cap(r, 0.7186, 2.398e-9);
  EXPECT_NEAR(cap, 0.232, 1e-3);
  EXPECT_NEAR(watts_to_dbm(cap), 23.6, 0.05);
  EXPECT_LT(cap, r.p_v_max);
  EXPECT_NEAR(cap, 0.1 * 100.0 * r.noise_power / (0.7186 * 2.398e-9), 1e-12);
}

TEST(PowerCap, DenseLimit) {
  EXPECT_EQ(power_cap(RadioConfig{}, 0.7, INFINITY), 0.0);
  EXPECT_LT(power_cap(RadioConfig{}, 0.7, 1e3), 1e-10);
}

TEST(PowerCap, ClampsToMaximum) {
  RadioConfig r;
  r.epsilon = 1.0;
  r.interference_temperature = 1.0;
  EXPECT_EQ(power_cap(r, 0.7186, 2.398e-9), r.p_v_max);
  EXPECT_EQ(power_cap(r, 0.7186, 0.0), r.p_v_max);
}

TEST(SlotObjective, NothingOffloadedCostsNothing) {
  // The download is only charged when tasks are offloaded in the slot.
  const SlotContext ctx = context_at(10);
  const SlotState s{10, 4, 0, 5e5};
  EXPECT_EQ(slot_objective(0.0, 0.2, 3.0, s, ctx, 1e14), 0.0);
}

TEST(SlotObjective, EnergyIgnored) {
  const SlotContext ctx = context_at(10);
  const SlotState s{10, 3, 0, 5e5};
  EXPECT_DOUBLE_EQ(slot_objective(2e7, 0.2, 3.0, s, ctx, 0.0), -6e14);
}

TEST(SlotObjective, MatchesStraightLine) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const auto t = static_cast<std::int64_t>(u(rng) * 300);
    const SlotContext ctx = context_at(t);
    const SlotState s{t, 1 + static_cast<std::int64_t>(u(rng) * 30), 0, 1.0 + u(rng) * 1e6};
    const double c = u(rng) * 1e8, pv = 0.01 + 0.2 * u(rng), pr = 0.01 + 3.0 * u(rng);
    const double eta = std::pow(10.0, 10.0 + 6.0 * u(rng));
    const double want = straight_objective(c, pv, pr, static_cast<double>(s.queue_tasks),
                                           s.output_bits, ctx.channel_gain, eta);
    EXPECT_NEAR(slot_objective(c, pv, pr, s, ctx, eta), want, 1e-11 * std::abs(want));
  }
}

TEST(OptimalCin, EnergyIgnoredExample) {
  SlotContext ctx = context_at(0);
  ctx.budget = 3.6;
  ctx.channel_gain = free_space_constant(60e9) / 85.0;
  const double down = ctx.down_rate(ctx.radio.p_r_max);
  SlotState s{0, 100, 0, 1e-5 * down};
  ControlConfig cfg;
  cfg.eta = 0.0;
  const double c = optimal_c_in(dbm_to_watts(25.0), ctx.radio.p_r_max, s, ctx, cfg);
  EXPECT_NEAR(c, 1.194e8, 0.002e8);
  EXPECT_NEAR(c / ctx.compute.task_size_bits, 11.9, 0.05);
  const double up = ctx.up_rate(dbm_to_watts(25.0));
  EXPECT_NEAR(c, (3.6 - 1e-5) / (1.0 / up + 3e-8), 1e-6 * c);
}

TEST(OptimalCin, EmptyQueue) {
  const SlotContext ctx = context_at(3);
  ControlConfig cfg;
  cfg.eta = 0.0;
  EXPECT_EQ(optimal_c_in(0.2, 3.0, SlotState{3, 0, 0, 10.0}, ctx, cfg), 0.0);
}

TEST(OptimalCin, WellAboveThresholdHolds) {
  const SlotContext ctx = context_at(3);
  const SlotState s{3, 20, 0, 1e5};
  ControlConfig cfg;
  cfg.eta = 10.0 * energy_saving_threshold(0.2, s, ctx);
  EXPECT_EQ(optimal_c_in(0.2, 3.0, s, ctx, cfg), 0.0);
}

TEST(OptimalCin, ThresholdBoundary) {
  const SlotContext ctx = context_at(3);
  const SlotState s{3, 20, 0, 1e5};
  const double pv = 0.2;
  const double th = energy_saving_threshold(pv, s, ctx);
  const double want = s.queue_bits(ctx.compute) /
                      (ctx.compute.switched_capacitance * ctx.compute.cycles_per_bit *
                           ctx.compute.rsu_clock * ctx.compute.rsu_clock +
                       pv / ctx.up_rate(pv));
  EXPECT_LE(std::abs(th - want), 2.0 * std::abs(std::nextafter(want, INFINITY) - want));

  ControlConfig cfg;
  cfg.eta = th;
  EXPECT_EQ(optimal_c_in(pv, 3.0, s, ctx, cfg), 0.0);
  cfg.eta = std::nextafter(th, 0.0);
  EXPECT_EQ(optimal_c_in(pv, 3.0, s, ctx, cfg), max_allowable_c_in(pv, 3.0, s, ctx));
  EXPECT_GT(optimal_c_in(pv, 3.0, s, ctx, cfg), 0.0);
}

TEST(OptimalCin, NonDecreasingInBacklog) {
  const SlotContext ctx = context_at(7);
  ControlConfig cfg;
  cfg.eta = 1e13;
  double prev = 0.0;
  for (std::int64_t q = 0; q < 60; ++q) {
    const double c = optimal_c_in(0.2, 3.0, SlotState{7, q, 0, 1e5}, ctx, cfg);
    EXPECT_GE(c, prev) << q;
    prev = c;
  }
}

TEST(OptimalCin, NoTimeLeft) {
  SlotContext ctx = context_at(3);
  ctx.budget = 1e-9;
  ControlConfig cfg;
  cfg.eta = 0.0;
  EXPECT_EQ(optimal_c_in(0.2, 3.0, SlotState{3, 5, 0, 1e6}, ctx, cfg), 0.0);
}

TEST(SolveSlot, EmptyQueueIsIdle) {
  const SlotContext ctx = context_at(3);
  const ControlDecision d = solve_slot(SlotState{3, 0, 2, 1e5}, ctx, ControlConfig{});
  EXPECT_EQ(d.c_in_tasks, 0);
  EXPECT_EQ(d.p_v, 0.0);
  EXPECT_EQ(d.p_r, 0.0);
  EXPECT_EQ(d.energy_low, 0.0);
  EXPECT_EQ(d.tau.total(), 0.0);
  EXPECT_EQ(d.slot_case, SlotCase::kIdle);
}

TEST(SolveSlot, ShortBudgetIsIdle) {
  SlotContext ctx = context_at(3);
  ctx.budget = 0.072;  // below the 0.3 s compute time of one task
  const ControlDecision d = solve_slot(SlotState{3, 9, 0, 1e5}, ctx, ControlConfig{});
  EXPECT_EQ(d.c_in_tasks, 0);
  EXPECT_EQ(d.p_v, 0.0);
  EXPECT_EQ(d.p_r, 0.0);
}

TEST(SolveSlot, EnergyIgnoredUsesFullPower) {
  std::mt19937_64 rng(12);
  ControlConfig cfg;
  cfg.eta = 0.0;
  for (int i = 0; i < 30; ++i) {
    const fixtures::Instance in = fixtures::random_instance(rng);
    const ControlDecision d = solve_slot(in.state, in.ctx, cfg);
    if (d.c_in_tasks == 0) continue;
    EXPECT_EQ(d.p_v, std::min(in.ctx.power_cap, in.ctx.radio.p_v_max));
    EXPECT_EQ(d.p_r, in.ctx.radio.p_r_max);
    EXPECT_EQ(d.slot_case, SlotCase::kEnergyIgnored);
    EXPECT_EQ(d.c_in_relaxed_bits, max_allowable_c_in(d.p_v, d.p_r, in.state, in.ctx));
  }
}

TEST(SolveSlot, AlternationObjectiveNonIncreasing) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int alternated = 0;
  for (int i = 0; i < 20; ++i) {
    const fixtures::Instance in = fixtures::random_instance(rng);
    ControlConfig cfg;
    cfg.eta = std::pow(10.0, 11.0 + 3.0 * u(rng));
    SolveLog log;
    solve_slot(in.state, in.ctx, cfg, &log);
    if (log.objective.size() > 1) ++alternated;
    for (std::size_t k = 1; k < log.objective.size(); ++k) {
      EXPECT_LE(log.objective[k], log.objective[k - 1] + 1e-12 * std::abs(log.objective[k - 1]))
          << "instance " << i << " step " << k;
    }
  }
  EXPECT_GT(alternated, 0);
}

TEST(SolveSlot, RandomDecisionsAreFeasible) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const fixtures::Instance in = fixtures::random_instance(rng);
    ControlConfig cfg;
    cfg.eta = i % 4 == 0 ? 0.0 : std::pow(10.0, 11.0 + 4.0 * u(rng));
    const ControlDecision d = solve_slot(in.state, in.ctx, cfg);
    EXPECT_TRUE(check_decision(d, in.state, in.ctx).ok()) << i;
    EXPECT_LE(d.c_in_tasks, in.state.queue_tasks);
  }
}

TEST(SolveSlot, ScalingEtaAndBacklogTogether) {
  const SlotContext ctx = context_at(2);
  ControlConfig cfg;
  cfg.eta = 3e13;
  // Backlog large enough that the time budget, not C3, limits the load.
  const SlotState s{2, 40, 0, 3e5};
  const ControlDecision a = solve_slot(s, ctx, cfg);
  ControlConfig scaled = cfg;
  scaled.eta *= 3.0;
  const ControlDecision b = solve_slot(SlotState{2, 120, 0, 3e5}, ctx, scaled);
  EXPECT_EQ(a.c_in_tasks, b.c_in_tasks);
  EXPECT_NEAR(a.p_v, b.p_v, 1e-12 * a.p_v);
  EXPECT_NEAR(a.p_r, b.p_r, 1e-12 * a.p_r);
  EXPECT_EQ(a.slot_case, b.slot_case);
}

TEST(SolveSlot, HoldsWhenEnergyDominates) {
  const SlotContext ctx = context_at(2);
  const SlotState s{2, 10, 0, 3e5};
  ControlConfig cfg;
  cfg.eta = 10.0 * energy_saving_threshold(ctx.power_cap, s, ctx);
  const ControlDecision d = solve_slot(s, ctx, cfg);
  EXPECT_EQ(d.c_in_tasks, 0);
  EXPECT_EQ(d.slot_case, SlotCase::kEnergySaving);
}

TEST(SolveSlot, RoundingKeepsLatency) {
  std::mt19937_64 rng(15);
  ControlConfig cfg;
  cfg.eta = 0.0;
  for (int i = 0; i < 50; ++i) {
    const fixtures::Instance in = fixtures::random_instance(rng);
    const ControlDecision d = solve_slot(in.state, in.ctx, cfg);
    EXPECT_LE(d.tau.total(), in.ctx.budget);
    const double next = static_cast<double>(d.c_in_tasks + 1) * in.ctx.compute.task_size_bits;
    if (d.c_in_tasks < in.state.queue_tasks) {
      const Latency over = latency_components(next, in.state.output_bits, in.ctx.up_rate(d.p_v),
                                              in.ctx.down_rate(d.p_r), in.ctx.compute);
      // One more task must not fit, otherwise rounding gave too little.
      if (d.c_in_tasks > 0) {
        EXPECT_GT(over.total(), in.ctx.budget) << i;
      }
    }
  }
}

TEST(CheckDecision, FlagsEachConstraint) {
  const SlotContext ctx = context_at(2);
  const SlotState s{2, 3, 0, 1e5};
  ControlDecision d;
  d.c_in_tasks = 4;
  d.p_v = ctx.power_cap * 1.5;
  d.p_r = ctx.radio.p_r_max * 2.0;
  d.tau = Latency{0.0, ctx.budget, 1.0};
  const ConstraintReport r = check_decision(d, s, ctx);
  EXPECT_FALSE(r.latency);
  EXPECT_FALSE(r.backlog);
  EXPECT_FALSE(r.box);
  EXPECT_FALSE(r.power_cap);
  EXPECT_FALSE(r.ok());
}

TEST(DriftDiagnostic, AllZero) {
  const std::vector<DriftRecord> trace(10);
  const DriftReport r = drift_plus_penalty_diagnostic(trace, 1e14, ComputeConfig{});
  for (double v : r.drift_plus_penalty) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(r.violations, 0u);
}

TEST(DriftDiagnostic, TwoArrivals) {
  const std::vector<DriftRecord> trace{{0, 2, 0, 0.0}};
  const DriftReport r = drift_plus_penalty_diagnostic(trace, 0.0, ComputeConfig{});
  ASSERT_EQ(r.drift_plus_penalty.size(), 1u);
  EXPECT_DOUBLE_EQ(r.drift_plus_penalty[0], 0.5 * (2e7 * 2e7));
  EXPECT_EQ(r.violations, 0u);
}

TEST(DriftDiagnostic, PenaltyAdded) {
  const std::vector<DriftRecord> trace{{5, 1, 2, 40.0}};
  const DriftReport r = drift_plus_penalty_diagnostic(trace, 2.0, ComputeConfig{});
  EXPECT_DOUBLE_EQ(r.drift_plus_penalty[0], 0.5 * (4e7 * 4e7 - 5e7 * 5e7) + 80.0);
  EXPECT_DOUBLE_EQ(r.bound_constant, 0.5 * (4.0 + 2500.0) * 1e14);
}

TEST(DriftDiagnostic, DetectsArrivalsBeyondCap) {
  ComputeConfig c;
  c.arrival_cap = 1;
  // Arrivals above D_max break the bound's constant.
  const std::vector<DriftRecord> trace{{0, 30, 0, 0.0}};
  EXPECT_EQ(drift_plus_penalty_diagnostic(trace, 0.0, c).violations, 1u);
}
