#include "v2xedge/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "v2xedge/errors.hpp"

namespace v2x {

namespace {

struct KeySpec {
  std::string_view key;
  std::string_view value;
  std::string_view note;
};

// Default parameterisation: two-lane highway, 60 GHz, 50 m RSU spacing.
constexpr KeySpec kKeys[] = {
    {"geometry.rsu_spacing_m", "50", "distance between RSUs"},
    {"geometry.lane1_offset_m", "7", "perpendicular RSU distance, lane 1"},
    {"geometry.lane2_offset_m", "10", "perpendicular RSU distance, lane 2"},
    {"geometry.antenna_height_diff_m", "6", "vehicle/RSU antenna elevation difference"},
    {"geometry.vehicle_speed_kmh", "50", ""},
    {"geometry.pathloss_exponent", "2", ""},
    {"geometry.carrier_frequency_hz", "60e9", "sets beta = (c / (4 pi f))^2"},
    {"geometry.lane1_density_per_m", "0.1", ""},
    {"geometry.lane2_density_per_m", "0.1", ""},
    {"antenna.beamwidth_convention", "total", "total | half"},
    {"antenna.vehicle.main_lobe_gain_db", "3", ""},
    {"antenna.vehicle.side_lobe_gain_db", "-3", ""},
    {"antenna.vehicle.beamwidth_deg", "90", ""},
    {"antenna.rsu.main_lobe_gain_db", "15", ""},
    {"antenna.rsu.side_lobe_gain_db", "-15", ""},
    {"antenna.rsu.beamwidth_deg", "9", ""},
    {"radio.bandwidth_hz", "2e9", ""},
    {"radio.noise_figure_db", "7", "noise = -174 dBm/Hz + 10 log10(B) + NF"},
    {"radio.p_v_max_dbm", "25", ""},
    {"radio.p_r_max_dbm", "35", ""},
    {"radio.interference_temperature_db", "20", "relative to the noise power"},
    {"radio.epsilon", "0.1", "allowed Pr(I >= I_th)"},
    {"radio.interferer_power_dbm", "auto", "auto: interferers use the vehicle power cap"},
    {"compute.task_size_bits", "10e6", ""},
    {"compute.cycles_per_bit", "300", ""},
    {"compute.rsu_clock_hz", "10e9", ""},
    {"compute.switched_capacitance", "1e-28", ""},
    {"compute.arrival_rate", "8", "Poisson mean, tasks per slot"},
    {"compute.arrival_cap", "50", "D_max"},
    {"compute.output_bits_min", "1", ""},
    {"compute.output_bits_max", "1000000", ""},
    {"control.eta", "1e14", ""},
    {"control.sca_tolerance", "1e-16", ""},
    {"control.step_decay", "1e-5", ""},
    {"control.initial_step", "1", ""},
    {"control.prox_weight", "1e-3", ""},
    {"control.max_sca_iters", "100000", ""},
    {"control.max_alt_iters", "50", ""},
    {"control.alt_tolerance", "1e-6", ""},
    {"sim.t_end", "3000", "slots"},
    {"sim.seed", "1", ""},
    {"sim.road_half_length_m", "10000", "interferer sampling window"},
    {"sim.slot_length_s", "1", ""},
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  // strtod accepts forms like 1e14 and -3; require the whole token to parse.
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("key '" + std::string(key) + "': not a number: '" + s + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view key, std::string_view text) {
  const double v = parse_double(key, text);
  if (v != static_cast<double>(static_cast<std::int64_t>(v))) {
    throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" +
                      std::string(text) + "'");
  }
  return static_cast<std::int64_t>(v);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ConfigTable ConfigTable::defaults() {
  ConfigTable t;
  for (const KeySpec& k : kKeys) t.entries_.emplace(std::string(k.key), std::string(k.value));
  return t;
}

std::string ConfigTable::resolve(std::string_view key) const {
  if (entries_.contains(key)) return std::string(key);
  std::string match;
  int hits = 0;
  for (const auto& [full, _] : entries_) {
    if (full.size() > key.size() && full.ends_with(key) && full[full.size() - key.size() - 1] == '.') {
      match = full;
      ++hits;
    }
  }
  if (hits == 1) return match;
  if (hits > 1) throw ConfigError("ambiguous configuration key '" + std::string(key) + "'");
  throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

void ConfigTable::set(std::string_view key, std::string_view value) {
  entries_[resolve(trim(key))] = std::string(trim(value));
}

void ConfigTable::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override must look like key=value: '" + std::string(assignment) + "'");
  }
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

const std::string& ConfigTable::get(std::string_view key) const {
  const auto it = entries_.find(resolve(key));
  return it->second;
}

double ConfigTable::number(std::string_view key) const { return parse_double(key, get(key)); }

ConfigTable ConfigTable::parse(std::string_view text) {
  ConfigTable t = defaults();
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (!t.entries_.contains(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    t.entries_[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return t;
}

ConfigTable ConfigTable::load(const std::string& path) {
  if (path == "defaults") return defaults();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ConfigTable::render() const {
  std::ostringstream os;
  std::string_view section;
  for (const KeySpec& k : kKeys) {
    const std::string_view head = k.key.substr(0, k.key.find('.'));
    if (head != section) {
      if (!section.empty()) os << '\n';
      os << "# " << head << '\n';
      section = head;
    }
    os << k.key << " = " << entries_.at(std::string(k.key));
    if (!k.note.empty()) os << "  # " << k.note;
    os << '\n';
  }
  return os.str();
}

RunConfig to_run_config(const ConfigTable& t) {
  RunConfig cfg;

  const std::string& conv = t.get("antenna.beamwidth_convention");
  BeamwidthConvention convention;
  if (conv == "total") {
    convention = BeamwidthConvention::kTotal;
  } else if (conv == "half") {
    convention = BeamwidthConvention::kHalf;
  } else {
    throw ConfigError("antenna.beamwidth_convention must be 'total' or 'half'");
  }

  NetworkGeometry& g = cfg.geometry;
  g.rsu_spacing = t.number("geometry.rsu_spacing_m");
  g.lane1_offset = t.number("geometry.lane1_offset_m");
  g.lane2_offset = t.number("geometry.lane2_offset_m");
  g.antenna_height_diff = t.number("geometry.antenna_height_diff_m");
  g.vehicle_speed = kmh_to_ms(t.number("geometry.vehicle_speed_kmh"));
  g.pathloss_exponent = t.number("geometry.pathloss_exponent");
  const double carrier = t.number("geometry.carrier_frequency_hz");
  if (!(carrier > 0.0)) throw ConfigError("carrier frequency must be positive");
  g.freq_constant = free_space_constant(carrier);
  g.lane_densities = {t.number("geometry.lane1_density_per_m"),
                      t.number("geometry.lane2_density_per_m")};
  g.vehicle_pattern = make_pattern(t.number("antenna.vehicle.main_lobe_gain_db"),
                                   t.number("antenna.vehicle.side_lobe_gain_db"),
                                   t.number("antenna.vehicle.beamwidth_deg"), convention);
  g.rsu_pattern = make_pattern(t.number("antenna.rsu.main_lobe_gain_db"),
                               t.number("antenna.rsu.side_lobe_gain_db"),
                               t.number("antenna.rsu.beamwidth_deg"), convention);

  RadioConfig& r = cfg.radio;
  r.bandwidth = t.number("radio.bandwidth_hz");
  if (!(r.bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");
  r.noise_power = thermal_noise_watts(r.bandwidth, t.number("radio.noise_figure_db"));
  r.p_v_max = dbm_to_watts(t.number("radio.p_v_max_dbm"));
  r.p_r_max = dbm_to_watts(t.number("radio.p_r_max_dbm"));
  r.interference_temperature = r.noise_power * db_to_linear(t.number("radio.interference_temperature_db"));
  r.epsilon = t.number("radio.epsilon");
  if (const std::string& ip = t.get("radio.interferer_power_dbm"); ip != "auto") {
    cfg.interferer_power = dbm_to_watts(parse_double("radio.interferer_power_dbm", ip));
  }

  ComputeConfig& c = cfg.compute;
  c.task_size_bits = t.number("compute.task_size_bits");
  c.cycles_per_bit = t.number("compute.cycles_per_bit");
  c.rsu_clock = t.number("compute.rsu_clock_hz");
  c.switched_capacitance = t.number("compute.switched_capacitance");
  c.arrival_rate = t.number("compute.arrival_rate");
  c.arrival_cap = parse_int("compute.arrival_cap", t.get("compute.arrival_cap"));
  c.output_bits_min = parse_int("compute.output_bits_min", t.get("compute.output_bits_min"));
  c.output_bits_max = parse_int("compute.output_bits_max", t.get("compute.output_bits_max"));

  ControlConfig& k = cfg.control;
  k.eta = t.number("control.eta");
  k.sca_tolerance = t.number("control.sca_tolerance");
  k.step_decay = t.number("control.step_decay");
  k.initial_step = t.number("control.initial_step");
  k.prox_weight = t.number("control.prox_weight");
  k.max_sca_iters = static_cast<int>(parse_int("control.max_sca_iters", t.get("control.max_sca_iters")));
  k.max_alt_iters = static_cast<int>(parse_int("control.max_alt_iters", t.get("control.max_alt_iters")));
  k.alt_tolerance = t.number("control.alt_tolerance");

  cfg.t_end = parse_int("sim.t_end", t.get("sim.t_end"));
  const std::int64_t seed = parse_int("sim.seed", t.get("sim.seed"));
  if (seed < 0) throw ConfigError("sim.seed must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.road_half_length = t.number("sim.road_half_length_m");
  cfg.slot_length = t.number("sim.slot_length_s");

  cfg.validate();
  return cfg;
}

std::string describe(const ConfigTable& table) {
  const RunConfig cfg = to_run_config(table);
  std::ostringstream os;
  os << table.render() << '\n';
  os << "# derived\n";
  os << "# derived.freq_constant = " << fmt(cfg.geometry.freq_constant) << '\n';
  os << "# derived.noise_power_w = " << fmt(cfg.radio.noise_power) << '\n';
  os << "# derived.interference_temperature_w = " << fmt(cfg.radio.interference_temperature) << '\n';
  os << "# derived.vehicle_speed_m_per_s = " << fmt(cfg.geometry.vehicle_speed) << '\n';
  try {
    const RunDerived d = derive(cfg);
    os << "# derived.xi1 = " << fmt(d.xi1) << '\n';
    os << "# derived.upsilon = " << fmt(d.upsilon) << '\n';
    os << "# derived.interference_power_bound_w = "
       << fmt(interference_power_bound(cfg.radio, d.xi1, d.upsilon)) << '\n';
    os << "# derived.power_cap_w = " << fmt(d.power_cap) << " (" << fmt(watts_to_dbm(d.power_cap))
       << " dBm)\n";
  } catch (const DivergenceError& e) {
    os << "# derived.upsilon = diverges (" << e.what() << ")\n";
  }
  return os.str();
}

}  // namespace v2x
