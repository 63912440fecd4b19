#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mbpower/metrics.hpp"
#include "mbpower/noise.hpp"
#include "mbpower/optimizer.hpp"
#include "mbpower/spectrum.hpp"

namespace mbpower {

/// Malformed, incomplete or unknown scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct SweepOptions {
  double min_dbm = -6.0;
  double max_dbm = 9.0;
  double step_db = 1.0;
};

struct OutputOptions {
  bool plot_data = true;
  std::string prefix;
};

/// A fully resolved experiment.
struct Scenario {
  std::string name;
  LinkSpec link;
  LaunchSpectrum launch;
  ThroughputCurve curve;
  OptimizeOptions optimizer;
  EnforceOptions enforce;
  SweepOptions sweep;
  OutputOptions output;
  /// Resolved configuration with every default filled in and file tables
  /// inlined; loading it reproduces the scenario.
  nlohmann::ordered_json echo;
};

/// Applies `key=value` overrides to a raw config document. Keys are dotted
/// paths (array elements by index); values are parsed as JSON, falling back to
/// strings, with on/off accepted as booleans. The aliases `isrs`, `seed`,
/// `restarts` and `gamma` (every fiber) are also accepted.
void apply_overrides(nlohmann::json& doc, const std::vector<std::string>& overrides);

/// Parses and validates a config document. Relative table file references
/// resolve against `base_dir`.
Scenario parse_scenario(const nlohmann::json& doc, const std::string& base_dir = ".");

/// Reads a config file (or a bundled scenario by name), applies overrides and parses it.
Scenario load_scenario(const std::string& path_or_name,
                       const std::vector<std::string>& overrides = {});

/// Path of a bundled scenario, e.g. "clst_1000km".
std::string bundled_scenario_path(const std::string& name);

}  // namespace mbpower
