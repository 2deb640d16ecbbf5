#include "blfquad/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

extern char** environ;

namespace blfquad {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing chars");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + value +
                      "' as a number");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on")
    return true;
  if (value == "false" || value == "0" || value == "no" || value == "off")
    return false;
  throw ConfigError("key '" + key + "': cannot parse '" + value +
                    "' as a boolean");
}

long parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing chars");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + value +
                      "' as an integer");
  }
}

struct KeyBinding {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

using KeyTable = std::map<std::string, KeyBinding>;

void bind_double(KeyTable& t, const std::string& key,
                 std::function<double&(RunConfig&)> ref) {
  t[key] = KeyBinding{
      [ref, key](RunConfig& c, const std::string& k, const std::string& v) {
        ref(c) = parse_double(k, v);
      },
      [ref](const RunConfig& c) { return fmt(ref(const_cast<RunConfig&>(c))); }};
}

const KeyTable& key_table() {
  static const KeyTable table = [] {
    KeyTable t;
    t["scenario"] = KeyBinding{
        [](RunConfig& c, const std::string&, const std::string& v) {
          if (v != "orbital" && v != "helix" && v != "bow" && v != "custom")
            throw ConfigError("unknown scenario '" + v + "'");
          c.scenario_name = v;
        },
        [](const RunConfig& c) { return c.scenario_name; }};
    bind_double(t, "duration", [](RunConfig& c) -> double& { return c.scenario.duration; });
    bind_double(t, "start", [](RunConfig& c) -> double& { return c.scenario.start; });
    bind_double(t, "dt", [](RunConfig& c) -> double& { return c.scenario.dt; });
    t["decimation"] = KeyBinding{
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.decimation = static_cast<int>(parse_int(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.decimation); }};
    t["plots"] = KeyBinding{
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.plots = parse_bool(k, v);
        },
        [](const RunConfig& c) { return c.plots ? std::string("true") : std::string("false"); }};
    t["seed"] = KeyBinding{
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.seed = static_cast<unsigned long>(parse_int(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.seed); }};
    t["out"] = KeyBinding{
        [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; },
        [](const RunConfig& c) { return c.out_dir; }};
    t["model"] = KeyBinding{
        [](RunConfig& c, const std::string&, const std::string& v) {
          if (v == "matched")
            c.scenario.uncertainty.model = UncertaintyModel::kMatched;
          else if (v == "physical")
            c.scenario.uncertainty.model = UncertaintyModel::kPhysical;
          else
            throw ConfigError("model must be 'matched' or 'physical', got '" + v + "'");
        },
        [](const RunConfig& c) {
          return c.scenario.uncertainty.model == UncertaintyModel::kMatched
                     ? std::string("matched")
                     : std::string("physical");
        }};
    t["estimator"] = KeyBinding{
        [](RunConfig& c, const std::string&, const std::string& v) {
          if (v == "zero")
            c.scenario.estimator = EstimatorKind::kZero;
          else if (v == "tracker")
            c.scenario.estimator = EstimatorKind::kTracker;
          else
            throw ConfigError("estimator must be 'zero' or 'tracker', got '" + v + "'");
        },
        [](const RunConfig& c) {
          return c.scenario.estimator == EstimatorKind::kZero
                     ? std::string("zero")
                     : std::string("tracker");
        }};
    bind_double(t, "estimator.tau", [](RunConfig& c) -> double& { return c.scenario.estimator_tau; });

    bind_double(t, "vehicle.m", [](RunConfig& c) -> double& { return c.scenario.vehicle.m; });
    bind_double(t, "vehicle.jxx", [](RunConfig& c) -> double& { return c.scenario.vehicle.J_nominal[0]; });
    bind_double(t, "vehicle.jyy", [](RunConfig& c) -> double& { return c.scenario.vehicle.J_nominal[1]; });
    bind_double(t, "vehicle.jzz", [](RunConfig& c) -> double& { return c.scenario.vehicle.J_nominal[2]; });
    bind_double(t, "vehicle.jr", [](RunConfig& c) -> double& { return c.scenario.vehicle.J_r; });
    bind_double(t, "vehicle.d", [](RunConfig& c) -> double& { return c.scenario.vehicle.d; });
    bind_double(t, "vehicle.ct", [](RunConfig& c) -> double& { return c.scenario.vehicle.C_T; });
    bind_double(t, "vehicle.cq", [](RunConfig& c) -> double& { return c.scenario.vehicle.C_Q; });
    bind_double(t, "vehicle.mu", [](RunConfig& c) -> double& { return c.scenario.vehicle.mu; });
    bind_double(t, "vehicle.g", [](RunConfig& c) -> double& { return c.scenario.vehicle.g; });
    bind_double(t, "vehicle.kx", [](RunConfig& c) -> double& { return c.scenario.vehicle.K_drag[0]; });
    bind_double(t, "vehicle.ky", [](RunConfig& c) -> double& { return c.scenario.vehicle.K_drag[1]; });
    bind_double(t, "vehicle.kz", [](RunConfig& c) -> double& { return c.scenario.vehicle.K_drag[2]; });

    bind_double(t, "uncertainty.jdelta.x", [](RunConfig& c) -> double& { return c.scenario.vehicle.J_delta[0]; });
    bind_double(t, "uncertainty.jdelta.y", [](RunConfig& c) -> double& { return c.scenario.vehicle.J_delta[1]; });
    bind_double(t, "uncertainty.jdelta.z", [](RunConfig& c) -> double& { return c.scenario.vehicle.J_delta[2]; });
    bind_double(t, "uncertainty.h0.phi", [](RunConfig& c) -> double& { return c.scenario.uncertainty.h0[0]; });
    bind_double(t, "uncertainty.h0.theta", [](RunConfig& c) -> double& { return c.scenario.uncertainty.h0[1]; });
    bind_double(t, "uncertainty.h0.psi", [](RunConfig& c) -> double& { return c.scenario.uncertainty.h0[2]; });

    const char* pos_axes[3] = {"x", "y", "z"};
    const char* att_axes[3] = {"phi", "theta", "psi"};
    for (int i = 0; i < 3; ++i) {
      const std::string px = pos_axes[i];
      bind_double(t, "gains.k." + px, [i](RunConfig& c) -> double& { return c.scenario.pos_gains[i].barrier_gain; });
      bind_double(t, "gains.m." + px, [i](RunConfig& c) -> double& { return c.scenario.pos_gains[i].damping_gain; });
      bind_double(t, "bounds.pos." + px + ".lower", [i](RunConfig& c) -> double& { return c.scenario.constraints.pos[i].lower; });
      bind_double(t, "bounds.pos." + px + ".upper", [i](RunConfig& c) -> double& { return c.scenario.constraints.pos[i].upper; });
      bind_double(t, "limits.pos." + px, [i](RunConfig& c) -> double& { return c.scenario.constraints.pos_limit[i]; });
      bind_double(t, "initial.gamma." + px, [i](RunConfig& c) -> double& { return c.scenario.initial_pos_err[i]; });

      const std::string ax = att_axes[i];
      bind_double(t, "gains.z." + ax, [i](RunConfig& c) -> double& { return c.scenario.att_gains[i].barrier_gain; });
      bind_double(t, "gains.n." + ax, [i](RunConfig& c) -> double& { return c.scenario.att_gains[i].damping_gain; });
      bind_double(t, "bounds.att." + ax + ".lower", [i](RunConfig& c) -> double& { return c.scenario.constraints.att[i].lower; });
      bind_double(t, "bounds.att." + ax + ".upper", [i](RunConfig& c) -> double& { return c.scenario.constraints.att[i].upper; });
      bind_double(t, "limits.att." + ax, [i](RunConfig& c) -> double& { return c.scenario.constraints.att_limit[i]; });
      bind_double(t, "initial.upsilon." + ax, [i](RunConfig& c) -> double& { return c.scenario.initial_att_err[i]; });
    }

    bind_double(t, "saturation.thrust", [](RunConfig& c) -> double& { return c.scenario.saturation.thrust_max; });
    bind_double(t, "saturation.moment", [](RunConfig& c) -> double& { return c.scenario.saturation.moment_max; });
    t["saturation.enabled"] = KeyBinding{
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.scenario.saturation.enabled = parse_bool(k, v);
        },
        [](const RunConfig& c) {
          return c.scenario.saturation.enabled ? std::string("true") : std::string("false");
        }};

    auto bind_sin = [&t](const std::string& name,
                         std::function<SinusoidSpec&(RunConfig&)> ref) {
      bind_double(t, "custom." + name + ".offset", [ref](RunConfig& c) -> double& { return ref(c).offset; });
      bind_double(t, "custom." + name + ".amp", [ref](RunConfig& c) -> double& { return ref(c).amp; });
      bind_double(t, "custom." + name + ".freq", [ref](RunConfig& c) -> double& { return ref(c).freq; });
      bind_double(t, "custom." + name + ".phase", [ref](RunConfig& c) -> double& { return ref(c).phase; });
    };
    bind_sin("x", [](RunConfig& c) -> SinusoidSpec& { return c.custom.x; });
    bind_sin("y", [](RunConfig& c) -> SinusoidSpec& { return c.custom.y; });
    bind_sin("z", [](RunConfig& c) -> SinusoidSpec& { return c.custom.z; });
    bind_sin("psi", [](RunConfig& c) -> SinusoidSpec& { return c.custom.psi; });
    bind_sin("phi", [](RunConfig& c) -> SinusoidSpec& { return c.custom.phi; });
    bind_sin("theta", [](RunConfig& c) -> SinusoidSpec& { return c.custom.theta; });
    t["custom.analyticrollpitch"] = KeyBinding{
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.custom.analytic_roll_pitch = parse_bool(k, v);
        },
        [](const RunConfig& c) {
          return c.custom.analytic_roll_pitch ? std::string("true") : std::string("false");
        }};
    return t;
  }();
  return table;
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.scenario = make_orbital_scenario();
  c.scenario_name = "orbital";
  return c;
}

void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value) {
  const KeyTable& table = key_table();
  auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second.set(config, key, value);
}

void finalize_config(RunConfig& config) {
  if (config.scenario_name == "custom") {
    config.scenario.name = "custom";
    config.scenario.traj = make_custom_trajectory(config.custom);
    config.scenario.roll_pitch_from_outer = !config.custom.analytic_roll_pitch;
    if (config.custom.analytic_roll_pitch &&
        config.scenario.uncertainty.model != UncertaintyModel::kMatched)
      throw ConfigError(
          "analytic roll/pitch references require the matched model (the "
          "physical cascade realizes position control through its tilt)");
  } else {
    config.scenario.name = config.scenario_name;
    config.scenario.traj = trajectory_by_name(config.scenario_name);
    config.scenario.roll_pitch_from_outer = true;
  }
  if (config.decimation < 1) throw ConfigError("decimation must be >= 1");
  config.scenario.validate();
}

namespace {

struct FileEntry {
  std::string key, value;
  int line;
};

std::vector<FileEntry> parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::vector<FileEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << path << ":" << lineno << ": expected 'key = value', got '"
         << stripped << "'";
      throw ConfigError(os.str());
    }
    entries.push_back(FileEntry{trim(stripped.substr(0, eq)),
                                trim(stripped.substr(eq + 1)), lineno});
  }
  return entries;
}

std::string env_to_key(const std::string& name) {
  std::string key;
  for (char ch : name) key += ch == '_' ? '.' : static_cast<char>(std::tolower(ch));
  return key;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  RunConfig config = default_config();

  std::vector<FileEntry> entries;
  if (!path.empty()) entries = parse_file(path);

  // The scenario key selects the fixture whose values the remaining keys
  // override, regardless of where it appears in the file.
  std::string scenario_name = config.scenario_name;
  for (const FileEntry& e : entries)
    if (e.key == "scenario") scenario_name = e.value;
  for (char** env = environ; *env != nullptr; ++env) {
    const std::string var(*env);
    if (var.rfind(std::string(kEnvPrefix) + "SCENARIO=", 0) == 0)
      scenario_name = var.substr(var.find('=') + 1);
  }
  if (scenario_name != "custom") {
    config.scenario = scenario_by_name(scenario_name);
  } else {
    config.scenario = make_orbital_scenario();  // numeric defaults for custom
    config.scenario.name = "custom";
  }
  config.scenario_name = scenario_name;

  for (const FileEntry& e : entries) {
    try {
      apply_override(config, e.key, e.value);
    } catch (const ConfigError& err) {
      std::ostringstream os;
      os << path << ":" << e.line << ": " << err.what();
      throw ConfigError(os.str());
    }
  }

  const std::string prefix = kEnvPrefix;
  for (char** env = environ; *env != nullptr; ++env) {
    const std::string var(*env);
    if (var.rfind(prefix, 0) != 0) continue;
    const size_t eq = var.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = env_to_key(var.substr(prefix.size(), eq - prefix.size()));
    const std::string value = var.substr(eq + 1);
    try {
      apply_override(config, key, value);
    } catch (const ConfigError& err) {
      throw ConfigError(std::string("environment override ") +
                        var.substr(0, eq) + ": " + err.what());
    }
  }

  finalize_config(config);
  return config;
}

std::string config_echo(const RunConfig& config) {
  std::ostringstream os;
  for (const auto& [key, binding] : key_table())
    os << key << " = " << binding.get(config) << "\n";
  return os.str();
}

}  // namespace blfquad
