#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blfquad/types.hpp"

namespace blfquad {

// Saturation flag bits.
enum SatFlag : std::uint8_t {
  SAT_THRUST = 1 << 0,
  SAT_ROLL = 1 << 1,
  SAT_PITCH = 1 << 2,
  SAT_YAW = 1 << 3,
};

/// One telemetry record per (decimated) integration step.
struct TelemetryRow {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 theta = Vec3::Zero();
  Vec3 theta_dot = Vec3::Zero();
  Vec3 p_d = Vec3::Zero();
  Vec3 theta_d = Vec3::Zero();
  Vec3 pos_err = Vec3::Zero();       // gamma
  Vec3 att_err = Vec3::Zero();       // upsilon
  Vec3 accel_cmd = Vec3::Zero();     // delta
  double thrust_demand = 0.0;        // before saturation, N
  double u_T = 0.0;                  // applied thrust, N
  Vec3 moments = Vec3::Zero();       // applied moments, N m
  Vec4 omega = Vec4::Zero();         // rotor speeds, rad/s
  Vec3 E = Vec3::Zero();             // position Lyapunov values
  Vec3 D = Vec3::Zero();             // attitude Lyapunov values
  Vec3 h_bar = Vec3::Zero();         // adaptive gains
  Vec3 zeta = Vec3::Zero();          // position rate residuals (not in CSV)
  Vec3 lambda = Vec3::Zero();        // attitude rate residuals (not in CSV)
  std::uint8_t sat_flags = 0;
};

using TelemetryLog = std::vector<TelemetryRow>;

/// Column header of the telemetry CSV, fixed order.
extern const char* const kTelemetryCsvHeader;

/// Serializes the log with 17 significant digits per numeric field.
void write_telemetry_csv(const TelemetryLog& log, const std::string& path);

std::string telemetry_csv_line(const TelemetryRow& row);

}  // namespace blfquad
