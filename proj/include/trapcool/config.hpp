#pragma once

// Scenario files: flat `key = value` lines, '#' starts a comment.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trapcool/hilbert.hpp"
#include "trapcool/models.hpp"

namespace trapcool {

enum class OutputFormat { csv, json };

struct ScenarioConfig {
  SystemParams params;
  int n_trunc = 30;
  double tail_tolerance = 1e-8;
  double dt = 1e-4;
  double t_final = 1.0;
  int n_traj = 200;
  std::uint64_t seed = 1;
  // Set from the command line, not from the file.
  std::string output_path;
  OutputFormat output_format = OutputFormat::csv;

  FockBasisSpec basis() const { return {n_trunc, tail_tolerance}; }

  /// Throws config errors naming the offending key; returns soft warnings.
  std::vector<std::string> validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Accepted keys, in serialization order.
const std::vector<std::string>& config_keys();

/// Parses a scenario; `source` names the input in diagnostics. Keys that are
/// absent keep their defaults (the default scenario).
ScenarioConfig parse_config(std::istream& in, const std::string& source = "<config>");
ScenarioConfig parse_config_string(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// All keys, doubles at 17 significant digits; parse_config inverts it exactly.
std::string serialize_config(const ScenarioConfig& c);

/// Sets one key from its textual value (shared by the parser and sweeps).
void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& value);

/// Reads a numeric key; throws unsweepable_key for unknown keys.
double get_config_number(const ScenarioConfig& c, const std::string& key);

/// 17-significant-digit, locale-independent rendering.
std::string format_double(double x);

OutputFormat parse_format(const std::string& s);

}  // namespace trapcool
