#pragma once

#include <string>

#include "blfquad/scenario.hpp"

namespace blfquad {

/// Fully-resolved run configuration: a scenario plus I/O choices. Built from
/// defaults, an optional key/value file, and environment overrides.
struct RunConfig {
  std::string scenario_name = "orbital";
  Scenario scenario;
  CustomTrajectorySpec custom;
  int decimation = 10;
  bool plots = false;
  unsigned long seed = 1;
  std::string out_dir = "out";
};

/// Environment variables BLFQUAD_<KEY> (dots replaced by underscores,
/// uppercase) override file values for any known key.
inline constexpr const char* kEnvPrefix = "BLFQUAD_";

RunConfig default_config();

/// Parses the key/value file (empty path: defaults only), applies
/// environment overrides, rebuilds the scenario and validates everything.
/// Throws ConfigError with file/line/key diagnostics.
RunConfig load_config(const std::string& path);

/// Applies one dotted-key override; used by the sweep driver.
void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value);

/// Re-derives the scenario trajectory/validation after overrides.
void finalize_config(RunConfig& config);

/// Canonical echo of every key at its resolved value; parsing it back
/// reproduces the run exactly.
std::string config_echo(const RunConfig& config);

}  // namespace blfquad
