#include "blfquad/trajectory.hpp"

#include <cmath>

#include "blfquad/errors.hpp"

namespace blfquad {

namespace {

struct Channel {
  double val, dot, ddot;
};

// f(t) = 1 + (1 - e^{-c t^3}) * w(t) for a carrier wave w.
// With E = e^{-c t^3}: E' = -3 c t^2 E, E'' = (-6 c t + 9 c^2 t^4) E.
Channel blended(double t, double c, double w, double w_dot, double w_ddot) {
  const double E = std::exp(-c * t * t * t);
  const double Ed = -3.0 * c * t * t * E;
  const double Edd = (-6.0 * c * t + 9.0 * c * c * t * t * t * t) * E;
  Channel out;
  out.val = 1.0 + (1.0 - E) * w;
  out.dot = -Ed * w + (1.0 - E) * w_dot;
  out.ddot = -Edd * w - 2.0 * Ed * w_dot + (1.0 - E) * w_ddot;
  return out;
}

Channel lateral_x(double t) {
  return blended(t, 3.0, std::cos(t), -std::sin(t), -std::cos(t));
}

Channel lateral_y_orbital(double t) {
  return blended(t, 5.0, std::sin(t), std::cos(t), -std::sin(t));
}

Channel lateral_y_bow(double t) {
  // sin t * cos t = sin(2t)/2
  const double s = 0.5 * std::sin(2.0 * t);
  const double sd = std::cos(2.0 * t);
  const double sdd = -2.0 * std::sin(2.0 * t);
  return blended(t, 5.0, s, sd, sdd);
}

}  // namespace

TrajectorySample scenario_orbital(double t) {
  TrajectorySample s;
  const Channel x = lateral_x(t);
  const Channel y = lateral_y_orbital(t);
  s.p_d = Vec3{x.val, y.val, 0.1 + 0.1 * std::sin(t)};
  s.p_d_dot = Vec3{x.dot, y.dot, 0.1 * std::cos(t)};
  s.p_d_ddot = Vec3{x.ddot, y.ddot, -0.1 * std::sin(t)};
  return s;  // psi_d = 0 with zero derivatives
}

TrajectorySample scenario_helix(double t) {
  TrajectorySample s;
  const Channel x = lateral_x(t);
  const Channel y = lateral_y_orbital(t);
  s.p_d = Vec3{x.val, y.val, 0.1 + t / 50.0};
  s.p_d_dot = Vec3{x.dot, y.dot, 0.02};
  s.p_d_ddot = Vec3{x.ddot, y.ddot, 0.0};
  return s;
}

TrajectorySample scenario_bow(double t) {
  TrajectorySample s;
  const Channel x = lateral_x(t);
  const Channel y = lateral_y_bow(t);
  s.p_d = Vec3{x.val, y.val, 0.1 + 0.1 * std::cos(t)};
  s.p_d_dot = Vec3{x.dot, y.dot, -0.1 * std::sin(t)};
  s.p_d_ddot = Vec3{x.ddot, y.ddot, -0.1 * std::cos(t)};
  return s;
}

namespace {

Channel sinusoid(const SinusoidSpec& c, double t) {
  const double arg = c.freq * t + c.phase;
  Channel out;
  out.val = c.offset + c.amp * std::sin(arg);
  out.dot = c.amp * c.freq * std::cos(arg);
  out.ddot = -c.amp * c.freq * c.freq * std::sin(arg);
  return out;
}

}  // namespace

TrajectoryFn make_custom_trajectory(const CustomTrajectorySpec& spec) {
  return [spec](double t) {
    TrajectorySample s;
    const Channel x = sinusoid(spec.x, t);
    const Channel y = sinusoid(spec.y, t);
    const Channel z = sinusoid(spec.z, t);
    const Channel psi = sinusoid(spec.psi, t);
    s.p_d = Vec3{x.val, y.val, z.val};
    s.p_d_dot = Vec3{x.dot, y.dot, z.dot};
    s.p_d_ddot = Vec3{x.ddot, y.ddot, z.ddot};
    s.theta_d[ATT_YAW] = psi.val;
    s.theta_d_dot[ATT_YAW] = psi.dot;
    s.theta_d_ddot[ATT_YAW] = psi.ddot;
    if (spec.analytic_roll_pitch) {
      const Channel phi = sinusoid(spec.phi, t);
      const Channel th = sinusoid(spec.theta, t);
      s.theta_d[ATT_ROLL] = phi.val;
      s.theta_d_dot[ATT_ROLL] = phi.dot;
      s.theta_d_ddot[ATT_ROLL] = phi.ddot;
      s.theta_d[ATT_PITCH] = th.val;
      s.theta_d_dot[ATT_PITCH] = th.dot;
      s.theta_d_ddot[ATT_PITCH] = th.ddot;
    }
    return s;
  };
}

TrajectoryFn trajectory_by_name(const std::string& name) {
  if (name == "orbital") return [](double t) { return scenario_orbital(t); };
  if (name == "helix") return [](double t) { return scenario_helix(t); };
  if (name == "bow") return [](double t) { return scenario_bow(t); };
  throw ConfigError("unknown trajectory name: " + name);
}

}  // namespace blfquad
