#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <optional>
#include <string>
#include <vector>

#include "v2xedge/config.hpp"
#include "v2xedge/errors.hpp"
#include "v2xedge/sim.hpp"
#include "v2xedge/validation.hpp"

namespace v2x::cli {

namespace {

struct Common {
  std::string config = "defaults";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "config file, or 'defaults'");
  cmd->add_option("-s,--set,--override", c.overrides, "key=value override (repeatable)");
  cmd->add_option("--seed", c.seed, "base random seed");
}

ConfigTable load_table(const Common& c) {
  ConfigTable t = ConfigTable::load(c.config);
  for (const std::string& o : c.overrides) t.apply_override(o);
  if (c.seed) t.set("sim.seed", std::to_string(*c.seed));
  return t;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// CSV goes to `path`, or to `out` when the path is empty or "-".
template <class Fn>
void emit_csv(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file: " + path);
  write(f);
  if (!f) throw ConfigError("failed writing output file: " + path);
}

void print_metrics(std::ostream& os, const RunMetrics& m) {
  os << "avg_queue_tasks      " << num(m.avg_queue_tasks) << '\n'
     << "avg_energy_low_J     " << num(m.avg_energy_low) << '\n'
     << "avg_computing_time_s " << num(m.avg_computing_time) << '\n';
}

int cmd_run(const Common& c, const std::string& output, const std::string& trace, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg = to_run_config(load_table(c));
  cfg.keep_trace = !trace.empty();
  const RunMetrics m = run(cfg);
  const bool csv_to_stdout = output.empty() || output == "-";
  std::ostream& summary = csv_to_stdout ? err : out;
  emit_csv(output, out, [&](std::ostream& os) { write_run_csv(os, m); });
  if (cfg.keep_trace) emit_csv(trace, out, [&](std::ostream& os) { write_trace_csv(os, m.trace); });
  summary << "slots " << m.slots << ", seed " << m.seed << ", power cap " << num(m.derived.power_cap)
          << " W\n";
  print_metrics(summary, m);
  return kOk;
}

int cmd_sweep(const Common& c, const std::string& axis_name, const std::vector<double>& values,
              unsigned threads, const std::string& output, std::ostream& out, std::ostream& err) {
  const std::optional<SweepAxis> axis = parse_axis(axis_name);
  if (!axis) {
    err << "error: unknown sweep axis '" << axis_name
        << "' (expected interference_temperature_db, lane_densities, arrival_rate or eta)\n";
    return kConfigError;
  }
  if (values.empty()) throw ConfigError("--values needs at least one value");
  const RunConfig base = to_run_config(load_table(c));
  // Reject bad axis values before spending time on the other points.
  for (double v : values) apply_axis(base, *axis, v).validate();

  const std::vector<SweepPoint> points = sweep(base, *axis, values, threads);
  const bool csv_to_stdout = output.empty() || output == "-";
  std::ostream& summary = csv_to_stdout ? err : out;
  emit_csv(output, out, [&](std::ostream& os) { write_sweep_csv(os, points); });

  int failed = 0;
  for (const SweepPoint& p : points) {
    if (p.metrics) continue;
    ++failed;
    summary << "point " << to_string(*axis) << "=" << num(p.value) << " failed: " << p.error << '\n';
  }
  const TradeoffCheck tc = check_tradeoff(points);
  summary << "axis " << to_string(*axis) << ", " << points.size() << " points, " << failed
          << " failed\n"
          << "tradeoff_monotone " << (tc.monotone ? "yes" : "no") << " (" << tc.inversions
          << " inversions)\n";
  return failed > 0 ? kSolverFailure : kOk;
}

int cmd_validate(const Common& c, std::int64_t draws, std::ostream& out) {
  const RunConfig cfg = to_run_config(load_table(c));
  const OutageReport r = validate_outage(cfg, draws);
  out << "draws                    " << r.draws << '\n'
      << "interferer_power_W       " << num(r.tx_power) << '\n'
      << "interference_threshold_W " << num(r.threshold) << '\n'
      << "empirical_probability    " << num(r.probability) << '\n'
      << "allowed (eps + 3 se)     " << num(r.epsilon + 3.0 * r.standard_error) << '\n'
      << "mean_interference_W      " << num(r.mean_interference) << '\n'
      << "analytic_mean_W          " << num(r.analytic_mean) << '\n'
      << "analytic_mean_window_W   " << num(r.analytic_mean_truncated) << '\n'
      << "mean_relative_error      " << num(r.mean_relative_error()) << '\n'
      << (r.pass ? "PASS" : "FAIL") << '\n';
  return r.pass ? kOk : kValidationFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Edge offloading and power allocation simulator", "v2xedge"};
  app.require_subcommand(1);

  Common run_opts, sweep_opts, val_opts, show_opts;
  std::string run_output, run_trace, sweep_output, axis;
  std::vector<double> values;
  unsigned threads = 0;
  std::int64_t draws = 10000;

  CLI::App* run_cmd = app.add_subcommand("run", "simulate one configuration");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("-o,--output", run_output, "metrics CSV path ('-' = stdout)");
  run_cmd->add_option("--trace", run_trace, "per-slot trace CSV path");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run one simulation per axis value");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--axis", axis, "parameter to vary")->required();
  sweep_cmd->add_option("--values", values, "comma separated values")->required()->delimiter(',');
  sweep_cmd->add_option("-j,--threads", threads, "worker threads (0 = all cores)");
  sweep_cmd->add_option("-o,--output", sweep_output, "sweep CSV path ('-' = stdout)");

  CLI::App* val_cmd = app.add_subcommand("validate-lemma2", "Monte Carlo check of the interference outage bound");
  add_common(val_cmd, val_opts);
  val_cmd->add_option("--draws", draws, "number of interferer fields")->check(CLI::Range(std::int64_t{1000}, std::int64_t{1} << 40));

  CLI::App* show_cmd = app.add_subcommand("show-config", "print the effective configuration");
  add_common(show_cmd, show_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(run_opts, run_output, run_trace, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep_opts, axis, values, threads, sweep_output, out, err);
    if (*val_cmd) return cmd_validate(val_opts, draws, out);
    if (*show_cmd) {
      out << describe(load_table(show_opts));
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DivergenceError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kConfigError;
}

}  // namespace v2x::cli
