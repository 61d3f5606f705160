#include "v2xedge/sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

#include "v2xedge/errors.hpp"
#include "v2xedge/queue.hpp"

namespace v2x {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  geometry.validate();
  radio.validate();
  compute.validate();
  control.validate();
  if (t_end < 1) throw ConfigError("t_end must be at least 1");
  if (!(slot_length > 0.0)) throw ConfigError("slot length must be positive");
  if (!(road_half_length >= 10.0 * geometry.rsu_spacing)) {
    throw ConfigError("road half-length must be at least 10 RSU spacings");
  }
}

RunDerived derive(const RunConfig& cfg) {
  RunDerived d;
  d.xi1 = expected_gain_product(cfg.geometry);
  d.upsilon = upsilon(cfg.geometry);
  d.power_cap = power_cap(cfg.radio, d.xi1, d.upsilon);
  return d;
}

RunMetrics run(const RunConfig& cfg) {
  cfg.validate();
  RunMetrics m;
  m.seed = cfg.seed;
  m.derived = derive(cfg);
  m.slots = cfg.t_end;
  if (cfg.keep_trace) m.trace.reserve(static_cast<std::size_t>(cfg.t_end));

  std::mt19937_64 rng(cfg.seed);
  double sum_queue = 0.0;
  double sum_energy = 0.0;
  double sum_time = 0.0;
  std::int64_t queue = 0;

  for (std::int64_t t = 1; t <= cfg.t_end; ++t) {
    SlotState state;
    state.t = t;
    state.queue_tasks = queue;
    state.arrivals = sample_arrivals(cfg.compute, rng);
    state.output_bits = sample_output_bits(cfg.compute, rng);

    const SlotContext ctx = make_slot_context(t, cfg.geometry, cfg.radio, cfg.compute,
                                              cfg.slot_length, m.derived.power_cap);
    ControlDecision d;
    try {
      d = solve_slot(state, ctx, cfg.control);
    } catch (const std::exception& e) {
      throw SolverFailure(t, e.what());
    }
    if (d.c_in_tasks > state.queue_tasks) {
      throw SolverFailure(t, "controller offloaded more tasks than queued");
    }

    sum_queue += static_cast<double>(queue);
    sum_energy += d.energy_low;
    sum_time += d.tau.total();

    if (cfg.keep_trace) {
      m.trace.push_back(TraceSlot{t, queue, state.arrivals, state.output_bits, ctx.budget,
                                  ctx.channel_gain, d});
    }
    queue = advance_queue(state, d.c_in_tasks);
  }

  const double n = static_cast<double>(cfg.t_end);
  m.avg_queue_tasks = sum_queue / n;
  m.avg_energy_low = sum_energy / n;
  m.avg_computing_time = sum_time / n;
  return m;
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
  if (name == "interference_temperature_db" || name == "interference_temperature") {
    return SweepAxis::kInterferenceTemperatureDb;
  }
  if (name == "lane_densities") return SweepAxis::kLaneDensities;
  if (name == "arrival_rate") return SweepAxis::kArrivalRate;
  if (name == "eta") return SweepAxis::kEta;
  return std::nullopt;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kInterferenceTemperatureDb:
      return "interference_temperature_db";
    case SweepAxis::kLaneDensities:
      return "lane_densities";
    case SweepAxis::kArrivalRate:
      return "arrival_rate";
    case SweepAxis::kEta:
      return "eta";
  }
  return "unknown";
}

RunConfig apply_axis(const RunConfig& base, SweepAxis axis, double value) {
  RunConfig cfg = base;
  switch (axis) {
    case SweepAxis::kInterferenceTemperatureDb:
      cfg.radio.interference_temperature = cfg.radio.noise_power * db_to_linear(value);
      break;
    case SweepAxis::kLaneDensities:
      cfg.geometry.lane_densities = {value, value};
      break;
    case SweepAxis::kArrivalRate:
      cfg.compute.arrival_rate = value;
      break;
    case SweepAxis::kEta:
      cfg.control.eta = value;
      break;
  }
  return cfg;
}

std::uint64_t derive_seed(std::uint64_t base, double value) {
  return splitmix64(splitmix64(base) ^ std::bit_cast<std::uint64_t>(value));
}

std::vector<SweepPoint> sweep(const RunConfig& base, SweepAxis axis,
                              const std::vector<double>& values, unsigned threads) {
  std::vector<SweepPoint> points(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    points[i].value = values[i];
    points[i].seed = derive_seed(base.seed, values[i]);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      SweepPoint& p = points[i];
      try {
        RunConfig cfg = apply_axis(base, axis, p.value);
        cfg.seed = p.seed;
        p.metrics = run(cfg);
      } catch (const std::exception& e) {
        p.error = e.what();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(points.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return points;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
  os << kMetricsHeader << '\n';
  const std::string nan = "nan";
  for (const SweepPoint& p : points) {
    os << fmt(p.value) << ',';
    if (p.metrics) {
      os << fmt(p.metrics->avg_queue_tasks) << ',' << fmt(p.metrics->avg_energy_low) << ','
         << fmt(p.metrics->avg_computing_time) << ',' << p.metrics->slots;
    } else {
      os << nan << ',' << nan << ',' << nan << ',' << 0;
    }
    os << ',' << p.seed << '\n';
  }
}

void write_run_csv(std::ostream& os, const RunMetrics& m) {
  os << kMetricsHeader << '\n';
  os << ',' << fmt(m.avg_queue_tasks) << ',' << fmt(m.avg_energy_low) << ','
     << fmt(m.avg_computing_time) << ',' << m.slots << ',' << m.seed << '\n';
}

void write_trace_csv(std::ostream& os, const std::vector<TraceSlot>& trace) {
  os << kTraceHeader << '\n';
  for (const TraceSlot& s : trace) {
    const ControlDecision& d = s.decision;
    os << s.t << ',' << s.queue_tasks << ',' << s.arrivals << ',' << d.c_in_tasks << ','
       << fmt(d.p_v) << ',' << fmt(d.p_r) << ',' << fmt(d.tau.upload) << ','
       << fmt(d.tau.compute) << ',' << fmt(d.tau.download) << ',' << fmt(d.energy_compute) << ','
       << fmt(d.energy_low) << ',' << fmt(s.budget) << '\n';
  }
}

TradeoffCheck check_tradeoff(const std::vector<SweepPoint>& points) {
  std::vector<const RunMetrics*> ok;
  for (const SweepPoint& p : points) {
    if (p.metrics) ok.push_back(&*p.metrics);
  }
  std::stable_sort(ok.begin(), ok.end(), [](const RunMetrics* a, const RunMetrics* b) {
    return a->avg_queue_tasks < b->avg_queue_tasks;
  });
  TradeoffCheck c;
  c.points = static_cast<int>(ok.size());
  for (std::size_t i = 1; i < ok.size(); ++i) {
    if (ok[i]->avg_energy_low > ok[i - 1]->avg_energy_low) ++c.inversions;
  }
  c.monotone = c.inversions <= 1;
  return c;
}

QueueStability assess_stability(const std::vector<TraceSlot>& trace) {
  QueueStability s;
  const std::size_t n = trace.size();
  if (n < 4) return s;
  auto mean = [&](std::size_t from, std::size_t to) {
    double sum = 0.0;
    for (std::size_t i = from; i < to; ++i) sum += static_cast<double>(trace[i].queue_tasks);
    return sum / static_cast<double>(to - from);
  };
  s.third_quartile_mean = mean(n / 2, 3 * n / 4);
  s.last_quartile_mean = mean(3 * n / 4, n);
  const double diff = std::abs(s.last_quartile_mean - s.third_quartile_mean);
  s.relative_change = s.third_quartile_mean > 0.0 ? diff / s.third_quartile_mean
                                                  : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  s.stable = s.relative_change < 0.2;
  return s;
}

std::vector<DriftRecord> drift_records(const std::vector<TraceSlot>& trace) {
  std::vector<DriftRecord> out;
  out.reserve(trace.size());
  for (const TraceSlot& s : trace) {
    out.push_back(DriftRecord{s.queue_tasks, s.arrivals, s.decision.c_in_tasks, s.decision.energy_low});
  }
  return out;
}

}  // namespace v2x
