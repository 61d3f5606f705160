#pragma once

// Slot-by-slot simulation of the typical vehicle and parameter sweeps.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "v2xedge/control.hpp"
#include "v2xedge/geometry.hpp"
#include "v2xedge/link.hpp"

namespace v2x {

struct RunConfig {
  NetworkGeometry geometry;
  RadioConfig radio;
  ComputeConfig compute;
  ControlConfig control;
  std::int64_t t_end = 3000;
  std::uint64_t seed = 1;
  double road_half_length = 10'000.0;  // m, interferer sampling window
  double slot_length = 1.0;            // s
  std::optional<double> interferer_power;  // W; unset means the vehicle power cap
  bool keep_trace = false;

  void validate() const;
};

/// Quantities fixed for a whole run.
struct RunDerived {
  double xi1 = 0.0;
  double upsilon = 0.0;
  double power_cap = 0.0;
};

RunDerived derive(const RunConfig& cfg);

struct TraceSlot {
  std::int64_t t = 0;
  std::int64_t queue_tasks = 0;
  std::int64_t arrivals = 0;
  double output_bits = 0.0;
  double budget = 0.0;
  double channel_gain = 0.0;
  ControlDecision decision;
};

struct RunMetrics {
  double avg_queue_tasks = 0.0;
  double avg_energy_low = 0.0;       // J
  double avg_computing_time = 0.0;   // s
  std::int64_t slots = 0;
  std::uint64_t seed = 0;
  RunDerived derived;
  std::vector<TraceSlot> trace;  // only with keep_trace
};

/// Run slots t = 1..t_end. Deterministic in cfg.seed. Throws SolverFailure
/// carrying the slot index when the controller fails.
RunMetrics run(const RunConfig& cfg);

enum class SweepAxis { kInterferenceTemperatureDb, kLaneDensities, kArrivalRate, kEta };

/// Accepts interference_temperature_db (alias interference_temperature),
/// lane_densities, arrival_rate and eta.
std::optional<SweepAxis> parse_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

/// Copy of `base` with the axis parameter set to `value`.
RunConfig apply_axis(const RunConfig& base, SweepAxis axis, double value);

/// Per-point seed, a hash of the base seed and the exact bits of the value.
std::uint64_t derive_seed(std::uint64_t base, double value);

struct SweepPoint {
  double value = 0.0;
  std::uint64_t seed = 0;
  std::optional<RunMetrics> metrics;
  std::string error;
};

/// Independent runs per value; failures are recorded per point. Points run
/// on up to `threads` worker threads (0 = hardware concurrency).
std::vector<SweepPoint> sweep(const RunConfig& base, SweepAxis axis,
                              const std::vector<double>& values, unsigned threads = 0);

inline constexpr std::string_view kMetricsHeader =
    "axis_value,avg_queue_tasks,avg_energy_low_J,avg_computing_time_s,slots,seed";
inline constexpr std::string_view kTraceHeader =
    "t,Q,D,C_in_tasks,P_v_W,P_R_W,tau1,tau2,tau3,E_c,E_low,budget";

/// Header plus one row per point. Failed points get nan metrics.
void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points);

/// Header plus one row; the axis column is left empty.
void write_run_csv(std::ostream& os, const RunMetrics& metrics);

void write_trace_csv(std::ostream& os, const std::vector<TraceSlot>& trace);

/// Energy should not increase with delay along a tradeoff sweep. Counts
/// adjacent pairs, ordered by average queue, where energy goes up.
struct TradeoffCheck {
  int inversions = 0;
  int points = 0;       // successful points considered
  bool monotone = false;  // at most one inversion
};

TradeoffCheck check_tradeoff(const std::vector<SweepPoint>& points);

struct QueueStability {
  double third_quartile_mean = 0.0;
  double last_quartile_mean = 0.0;
  double relative_change = 0.0;  // |last - third| / third
  bool stable = false;           // relative_change < 0.2
};

QueueStability assess_stability(const std::vector<TraceSlot>& trace);

std::vector<DriftRecord> drift_records(const std::vector<TraceSlot>& trace);

}  // namespace v2x
