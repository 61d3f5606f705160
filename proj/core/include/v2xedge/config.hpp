#pragma once

// Flat `key = value` configuration with dotted keys. Values are kept as the
// user wrote them (dB, dBm, km/h, degrees); conversion to SI happens only in
// to_run_config(). Lines starting with '#' are comments.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "v2xedge/sim.hpp"

namespace v2x {

class ConfigTable {
 public:
  /// Every known key with its default value.
  static ConfigTable defaults();

  /// Parse `key = value` text on top of the defaults. Unknown keys and
  /// malformed lines throw ConfigError.
  static ConfigTable parse(std::string_view text);

  /// "defaults" selects the built-in table, anything else is a file path.
  static ConfigTable load(const std::string& path);

  /// Set a known key. Accepts a unique trailing key component
  /// (`arrival_rate` for `compute.arrival_rate`).
  void set(std::string_view key, std::string_view value);

  /// `key=value` form used by command-line overrides.
  void apply_override(std::string_view assignment);

  const std::string& get(std::string_view key) const;
  double number(std::string_view key) const;

  /// Full key for a possibly abbreviated one; throws ConfigError if unknown or ambiguous.
  std::string resolve(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

  /// Canonical text form; parse(render()) reproduces the same table.
  std::string render() const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

/// Build and validate the run configuration. Throws ConfigError.
RunConfig to_run_config(const ConfigTable& table);

/// Human-readable listing of every effective parameter including derived
/// noise power, xi1, upsilon and the vehicle power cap. Derived lines are
/// comments, so the output is itself a loadable config.
std::string describe(const ConfigTable& table);

}  // namespace v2x
