#include "blfquad/position_control.hpp"

#include <cmath>
#include <sstream>

namespace blfquad {

namespace {
constexpr double kThrustEpsilon = 1e-6;    // N, below this the tilt is undefined
constexpr double kAsinClampSlack = 1e-12;  // numeric-noise allowance on |arg|-1
}  // namespace

double virtual_control(double err, double err_rate, double v_axis,
                       double traj_accel, const AxisBounds& bounds,
                       const PositionGains& gains, double k_drag, double mass) {
  const double beta_dot =
      barrier::stabilizing_rate_dot(err, err_rate, bounds, gains.barrier_gain);
  const double zeta =
      barrier::rate_residual(err, err_rate, bounds, gains.barrier_gain);
  const double grad = barrier::gradient_factor(err, bounds);
  return (k_drag / mass) * v_axis + traj_accel + beta_dot - err * grad -
         gains.damping_gain * zeta;
}

PositionLoopState position_loop_state(double err, double err_rate,
                                      const AxisBounds& bounds,
                                      const PositionGains& gains) {
  PositionLoopState s;
  s.err = err;
  s.err_rate = err_rate;
  s.zeta = barrier::rate_residual(err, err_rate, bounds, gains.barrier_gain);
  s.W = barrier::value(err, bounds);
  s.E = s.W + 0.5 * s.zeta * s.zeta;
  return s;
}

double extract_thrust(const Vec3& accel_cmd, const VehicleParams& params) {
  const double dz = accel_cmd[2] + params.g;
  return params.m *
         std::sqrt(accel_cmd[0] * accel_cmd[0] + accel_cmd[1] * accel_cmd[1] +
                   dz * dz);
}

std::pair<double, double> desired_attitude(const Vec3& accel_cmd, double psi_d,
                                           double u_T,
                                           const VehicleParams& params) {
  if (u_T <= kThrustEpsilon) {
    std::ostringstream os;
    os << "net thrust " << u_T << " N too small to define desired tilt";
    throw DegenerateThrustError(os.str());
  }
  const double spsi = std::sin(psi_d), cpsi = std::cos(psi_d);
  double asin_arg =
      params.m * (accel_cmd[0] * spsi - accel_cmd[1] * cpsi) / u_T;
  if (std::abs(asin_arg) > 1.0) {
    if (std::abs(asin_arg) > 1.0 + kAsinClampSlack) {
      std::ostringstream os;
      os << "lateral acceleration demand infeasible: |asin argument| = "
         << std::abs(asin_arg);
      throw ModelDomainError(os.str());
    }
    asin_arg = asin_arg > 0.0 ? 1.0 : -1.0;
  }
  const double phi_d = std::asin(asin_arg);
  const double theta_d = std::atan2(accel_cmd[0] * cpsi + accel_cmd[1] * spsi,
                                    accel_cmd[2] + params.g);
  return {phi_d, theta_d};
}

Vec3 accel_from_attitude(double u_T, double phi_d, double theta_d,
                         double psi_d, const VehicleParams& params) {
  const double cphi = std::cos(phi_d), sphi = std::sin(phi_d);
  const double cth = std::cos(theta_d), sth = std::sin(theta_d);
  const double cpsi = std::cos(psi_d), spsi = std::sin(psi_d);
  const double a = u_T / params.m;
  return Vec3{a * (cphi * sth * cpsi + sphi * spsi),
              a * (cphi * sth * spsi - sphi * cpsi),
              a * (cphi * cth) - params.g};
}

ConfinementInterval position_confinement(const AxisBounds& bounds, double E0,
                                         double env_lower, double env_upper) {
  return confinement_interval(bounds, E0, env_lower, env_upper);
}

}  // namespace blfquad
