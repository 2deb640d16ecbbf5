#include "blfquad/telemetry.hpp"

#include <cstdio>
#include <fstream>

#include "blfquad/errors.hpp"

namespace blfquad {

const char* const kTelemetryCsvHeader =
    "t, x, y, z, xd, yd, zd, phi, theta, psi, phid, thetad, psid, "
    "gx, gy, gz, up, ut_err_phi, ut_err_theta, ut_err_psi, "
    "uT, uphi, utheta, upsi, w1, w2, w3, w4, "
    "E_x, E_y, E_z, D_phi, D_theta, D_psi, "
    "hbar_phi, hbar_theta, hbar_psi, sat_flags";

namespace {

void append(std::string& out, double v, bool first = false) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), first ? "%.17g" : ",%.17g", v);
  out += buf;
}

}  // namespace

std::string telemetry_csv_line(const TelemetryRow& r) {
  std::string out;
  out.reserve(38 * 26);
  append(out, r.t, true);
  for (int i = 0; i < 3; ++i) append(out, r.p[i]);
  for (int i = 0; i < 3; ++i) append(out, r.p_d[i]);
  for (int i = 0; i < 3; ++i) append(out, r.theta[i]);
  for (int i = 0; i < 3; ++i) append(out, r.theta_d[i]);
  for (int i = 0; i < 3; ++i) append(out, r.pos_err[i]);
  append(out, r.thrust_demand);
  for (int i = 0; i < 3; ++i) append(out, r.att_err[i]);
  append(out, r.u_T);
  for (int i = 0; i < 3; ++i) append(out, r.moments[i]);
  for (int i = 0; i < 4; ++i) append(out, r.omega[i]);
  for (int i = 0; i < 3; ++i) append(out, r.E[i]);
  for (int i = 0; i < 3; ++i) append(out, r.D[i]);
  for (int i = 0; i < 3; ++i) append(out, r.h_bar[i]);
  out += ',';
  out += std::to_string(static_cast<unsigned>(r.sat_flags));
  return out;
}

void write_telemetry_csv(const TelemetryLog& log, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open telemetry file for writing: " + path);
  os << kTelemetryCsvHeader << '\n';
  for (const TelemetryRow& row : log) os << telemetry_csv_line(row) << '\n';
  if (!os) throw Error("write failed: " + path);
}

}  // namespace blfquad
