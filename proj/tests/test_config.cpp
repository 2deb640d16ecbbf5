#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "blfquad/config.hpp"

using namespace blfquad;

namespace {

std::string write_temp(const std::string& body) {
  static int counter = 0;
  const std::string path =
      "/tmp/blfquad_cfg_test_" + std::to_string(counter++) + ".cfg";
  std::ofstream os(path);
  os << body;
  return path;
}

}  // namespace

TEST_CASE("empty config resolves to the orbital defaults") {
  const RunConfig c = load_config(write_temp(""));
  CHECK(c.scenario_name == "orbital");
  CHECK(c.scenario.vehicle.m == doctest::Approx(0.485));
  CHECK(c.scenario.vehicle.C_T == doctest::Approx(2.9842e-5));
  CHECK(c.scenario.vehicle.C_Q == doctest::Approx(3.2320));
  CHECK(c.scenario.duration == 60.0);
  CHECK(c.scenario.dt == 1e-3);
  CHECK(c.decimation == 10);
  CHECK(c.scenario.saturation.thrust_max == 15.0);
  CHECK(c.scenario.saturation.moment_max == 3.0);
}

TEST_CASE("negative mass is rejected with a named diagnostic") {
  const std::string path = write_temp("vehicle.m = -1\n");
  try {
    load_config(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("mass must be positive") !=
          std::string::npos);
  }
}

TEST_CASE("helix selection carries the published corridor values") {
  const RunConfig c = load_config(write_temp("scenario = helix\n"));
  CHECK(c.scenario.constraints.pos[0].lower == 2.2);
  CHECK(c.scenario.constraints.pos[0].upper == 0.2);
  CHECK(c.scenario.constraints.pos[1].lower == 2.3);
  CHECK(c.scenario.constraints.pos[1].upper == 0.3);
  CHECK(c.scenario.constraints.pos[2].lower == 0.6);
  CHECK(c.scenario.constraints.pos[2].upper == 0.2);
  CHECK(c.scenario.constraints.att[0].lower == 0.08);
  CHECK(c.scenario.constraints.att[0].upper == 0.23);
  const std::string echo = config_echo(c);
  CHECK(echo.find("bounds.pos.y.lower = 2.2999999999999998") !=
        std::string::npos);
  CHECK(echo.find("scenario = helix") != std::string::npos);
}

TEST_CASE("scenario selection applies before other keys regardless of order") {
  const RunConfig c =
      load_config(write_temp("bounds.pos.y.lower = 1.9\nscenario = helix\n"));
  CHECK(c.scenario.constraints.pos[1].lower == 1.9);
}

TEST_CASE("unknown keys and malformed lines carry line diagnostics") {
  const std::string path = write_temp("vehicle.m = 0.5\nnosuch.key = 1\n");
  try {
    load_config(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(":2:") != std::string::npos);
    CHECK(msg.find("nosuch.key") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config(write_temp("just a line\n")), ConfigError);
  CHECK_THROWS_AS(load_config(write_temp("dt = fast\n")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("environment variables override file values") {
  const std::string path = write_temp("vehicle.m = 0.5\n");
  setenv("BLFQUAD_VEHICLE_M", "0.6", 1);
  const RunConfig c = load_config(path);
  unsetenv("BLFQUAD_VEHICLE_M");
  CHECK(c.scenario.vehicle.m == doctest::Approx(0.6));
}

TEST_CASE("config echo reproduces the run exactly") {
  const RunConfig a =
      load_config(write_temp("scenario = bow\ngains.k.x = 250\ndt = 0.002\n"));
  const RunConfig b = load_config(write_temp(config_echo(a)));
  CHECK(config_echo(a) == config_echo(b));
  CHECK(b.scenario.pos_gains[0].barrier_gain == 250.0);
}

TEST_CASE("sweep-style overrides validate values") {
  RunConfig c = default_config();
  apply_override(c, "gains.k.y", "50");
  finalize_config(c);
  CHECK(c.scenario.pos_gains[1].barrier_gain == 50.0);
  CHECK_THROWS_AS(apply_override(c, "gains.k.y", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "bogus", "1"), ConfigError);
  apply_override(c, "gains.k.y", "-5");
  CHECK_THROWS_AS(finalize_config(c), ConfigError);
}

TEST_CASE("custom scenarios require the matched model for analytic tilt") {
  RunConfig c = default_config();
  apply_override(c, "scenario", "custom");
  apply_override(c, "custom.analyticrollpitch", "true");
  apply_override(c, "custom.x.offset", "1.0");
  CHECK_THROWS_AS(finalize_config(c), ConfigError);
  apply_override(c, "model", "matched");
  CHECK_NOTHROW(finalize_config(c));
}

TEST_CASE("comments and blank lines are ignored") {
  const RunConfig c = load_config(
      write_temp("# heading\n\nvehicle.m = 0.5  # inline comment\n"));
  CHECK(c.scenario.vehicle.m == doctest::Approx(0.5));
}
