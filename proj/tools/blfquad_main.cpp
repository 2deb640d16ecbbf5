#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blfquad/config.hpp"
#include "blfquad/simulation.hpp"
#include "blfquad/svg_plot.hpp"
#include "blfquad/telemetry.hpp"
#include "blfquad/verification.hpp"

namespace fs = std::filesystem;
using namespace blfquad;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerification = 3;
constexpr int kExitIo = 4;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
  if (!os) throw Error("write failed: " + path.string());
}

void emit_plots(const fs::path& dir, const RunConfig& config,
                const TelemetryLog& log) {
  const Scenario& sc = config.scenario;
  std::vector<double> t;
  t.reserve(log.size());
  for (const TelemetryRow& r : log) t.push_back(r.t);

  auto series_of = [&](auto&& get, const std::string& label,
                       const std::string& color, bool dashed = false) {
    PlotSeries s;
    s.label = label;
    s.color = color;
    s.dashed = dashed;
    s.x = t;
    s.y.reserve(log.size());
    for (const TelemetryRow& r : log) s.y.push_back(get(r));
    return s;
  };

  {
    Path3D actual{"actual", {}, {}, {}, "#1f77b4", false};
    Path3D desired{"desired", {}, {}, {}, "#d62728", true};
    for (const TelemetryRow& r : log) {
      actual.x.push_back(r.p[0]);
      actual.y.push_back(r.p[1]);
      actual.z.push_back(r.p[2]);
      desired.x.push_back(r.p_d[0]);
      desired.y.push_back(r.p_d[1]);
      desired.z.push_back(r.p_d[2]);
    }
    write_svg_path3d((dir / "trajectory.svg").string(),
                     "3D path: " + sc.name, {actual, desired});
  }
  {
    const char* names[3] = {"x", "y", "z"};
    std::vector<PlotPanel> panels;
    for (int i = 0; i < 3; ++i) {
      PlotPanel p;
      p.title = std::string("position error ") + names[i];
      p.xlabel = "t [s]";
      p.ylabel = "error [m]";
      p.series.push_back(series_of(
          [i](const TelemetryRow& r) { return r.pos_err[i]; }, "gamma", "#1f77b4"));
      p.hlines.push_back(PlotHLine{sc.constraints.pos[i].upper, "#d62728"});
      p.hlines.push_back(PlotHLine{-sc.constraints.pos[i].lower, "#d62728"});
      panels.push_back(std::move(p));
    }
    write_svg_panels((dir / "errors_position.svg").string(), panels);
  }
  {
    const char* names[3] = {"roll", "pitch", "yaw"};
    std::vector<PlotPanel> panels;
    for (int k = 0; k < 3; ++k) {
      PlotPanel p;
      p.title = std::string("attitude error ") + names[k];
      p.xlabel = "t [s]";
      p.ylabel = "error [rad]";
      p.series.push_back(series_of(
          [k](const TelemetryRow& r) { return r.att_err[k]; }, "upsilon", "#1f77b4"));
      p.hlines.push_back(PlotHLine{sc.constraints.att[k].upper, "#d62728"});
      p.hlines.push_back(PlotHLine{-sc.constraints.att[k].lower, "#d62728"});
      panels.push_back(std::move(p));
    }
    write_svg_panels((dir / "errors_attitude.svg").string(), panels);
  }
  {
    std::vector<PlotPanel> panels(2);
    panels[0].title = "net thrust";
    panels[0].xlabel = "t [s]";
    panels[0].ylabel = "u_T [N]";
    panels[0].series.push_back(series_of(
        [](const TelemetryRow& r) { return r.u_T; }, "applied", "#1f77b4"));
    panels[0].series.push_back(series_of(
        [](const TelemetryRow& r) { return r.thrust_demand; }, "demand",
        "#ff7f0e", true));
    if (sc.saturation.enabled)
      panels[0].hlines.push_back(PlotHLine{sc.saturation.thrust_max, "#d62728"});
    panels[1].title = "body moments";
    panels[1].xlabel = "t [s]";
    panels[1].ylabel = "[N m]";
    const char* mnames[3] = {"u_phi", "u_theta", "u_psi"};
    const char* colors[3] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
    for (int k = 0; k < 3; ++k)
      panels[1].series.push_back(series_of(
          [k](const TelemetryRow& r) { return r.moments[k]; }, mnames[k],
          colors[k]));
    write_svg_panels((dir / "inputs.svg").string(), panels);
  }
  {
    std::vector<PlotPanel> panels(2);
    panels[0].title = "position Lyapunov values";
    panels[0].xlabel = "t [s]";
    panels[0].ylabel = "E";
    panels[1].title = "attitude Lyapunov values";
    panels[1].xlabel = "t [s]";
    panels[1].ylabel = "D";
    const char* pn[3] = {"E_x", "E_y", "E_z"};
    const char* an[3] = {"D_phi", "D_theta", "D_psi"};
    const char* colors[3] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
    for (int i = 0; i < 3; ++i) {
      panels[0].series.push_back(series_of(
          [i](const TelemetryRow& r) { return r.E[i]; }, pn[i], colors[i]));
      panels[1].series.push_back(series_of(
          [i](const TelemetryRow& r) { return r.D[i]; }, an[i], colors[i]));
    }
    write_svg_panels((dir / "lyapunov.svg").string(), panels);
  }
}

int do_run(const std::string& config_path, const std::string& out_override,
           bool plots_override) {
  RunConfig config;
  try {
    config = load_config(config_path);
    if (!out_override.empty()) config.out_dir = out_override;
    if (plots_override) config.plots = true;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }

  fs::path dir(config.out_dir);
  try {
    fs::create_directories(dir);
    write_text(dir / "config_resolved.txt", config_echo(config));
  } catch (const std::exception& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }

  SimResult result;
  try {
    result = run_scenario(config.scenario, config.decimation);
  } catch (const BoundViolationError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerification;
  } catch (const ModelDomainError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerification;
  } catch (const InfeasibleAllocationError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerification;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    write_telemetry_csv(result.log, (dir / "telemetry.csv").string());
    write_text(dir / "report.json", report_to_json(result.report) + "\n");
    if (config.plots) emit_plots(dir, config, result.log);
  } catch (const std::exception& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }

  std::cout << "run complete: " << result.report.steps << " steps, "
            << result.log.size() << " telemetry rows, max|gamma|="
            << result.report.max_abs_pos_err.maxCoeff() << " m, max|upsilon|="
            << result.report.max_abs_att_err.maxCoeff() << " rad\n";
  std::cout << "outputs in " << dir.string() << "\n";
  return kExitOk;
}

int do_verify(bool fast, unsigned long seed) {
  verification::Options opt;
  opt.fast = fast;
  opt.seed = seed;
  bool all_pass = true;
  std::cout << "acceptance criteria:\n";
  for (const auto& c : verification::acceptance_criteria(opt)) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " -- "
              << c.detail << "\n";
    all_pass = all_pass && c.pass;
  }
  std::cout << "module invariants:\n";
  for (const auto& c : verification::property_suite(opt)) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " -- "
              << c.detail << "\n";
    all_pass = all_pass && c.pass;
  }
  return all_pass ? kExitOk : kExitVerification;
}

std::vector<std::string> split_csv(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int do_sweep(const std::string& config_path, const std::string& param,
             const std::string& values_csv, const std::string& out_override) {
  RunConfig base;
  try {
    base = load_config(config_path);
    if (!out_override.empty()) base.out_dir = out_override;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  const std::vector<std::string> values = split_csv(values_csv);

  // Validate every cell before any run starts.
  for (const std::string& v : values) {
    RunConfig probe = base;
    try {
      apply_override(probe, param, v);
      finalize_config(probe);
    } catch (const ConfigError& e) {
      std::cerr << "configuration error for " << param << "=" << v << ": "
                << e.what() << "\n";
      return kExitConfig;
    }
  }

  std::ostringstream table;
  table << "value, status, violations, max_gamma, max_upsilon, "
           "terminal_gamma, terminal_upsilon, sat_duty, detail\n";
  std::cout << param << " sweep (" << values.size() << " cells)\n";
  for (const std::string& v : values) {
    RunConfig cell = base;
    apply_override(cell, param, v);
    finalize_config(cell);
    std::string status = "ok", detail;
    VerificationReport rep;
    try {
      rep = run_scenario(cell.scenario, cell.decimation).report;
    } catch (const Error& e) {
      status = "failed";
      detail = e.what();
    }
    table << v << ", " << status << ", " << rep.bound_violations << ", "
          << rep.max_abs_pos_err.maxCoeff() << ", "
          << rep.max_abs_att_err.maxCoeff() << ", "
          << rep.terminal_pos_err.cwiseAbs().maxCoeff() << ", "
          << rep.terminal_att_err.cwiseAbs().maxCoeff() << ", "
          << rep.saturation_duty << ", " << detail << "\n";
    std::cout << "  " << param << "=" << v << ": " << status
              << (detail.empty() ? "" : " (" + detail + ")") << "\n";
  }
  try {
    fs::create_directories(base.out_dir);
    write_text(fs::path(base.out_dir) / "sweep.csv", table.str());
  } catch (const std::exception& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  std::cout << "table written to " << (fs::path(base.out_dir) / "sweep.csv").string()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatially-constrained quadrotor trajectory-tracking simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, param, values;
  bool plots = false, fast = false;
  unsigned long seed = 1;

  CLI::App* run = app.add_subcommand("run", "simulate one scenario");
  run->add_option("--config", config_path, "key/value config file");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--plots", plots, "emit SVG plots");

  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_flag("--fast", fast, "reduced horizons and sample counts");
  verify->add_option("--seed", seed, "sampling seed");

  CLI::App* sweep = app.add_subcommand("sweep", "run one scenario per value");
  sweep->add_option("--config", config_path, "key/value config file");
  sweep->add_option("--param", param, "dotted configuration key")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(config_path, out_dir, plots);
    if (verify->parsed()) return do_verify(fast, seed);
    if (sweep->parsed()) return do_sweep(config_path, param, values, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerification;
  }
  return kExitOk;
}
