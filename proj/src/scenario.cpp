#include "blfquad/scenario.hpp"

#include <cmath>
#include <sstream>

namespace blfquad {

void ConstraintSpec::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!(pos_limit[i] > 0.0) || !(att_limit[i] > 0.0))
      throw ConfigError("spatial limits must be strictly positive");
    pos[i].validate();
    att[i].validate();
    if (pos_env_lower(i) < 0.0 || pos_env_upper(i) < 0.0) {
      std::ostringstream os;
      os << "position corridor exceeds its spatial limit on axis " << i
         << " (limit " << pos_limit[i] << ", bounds -" << pos[i].lower << "/"
         << pos[i].upper << ")";
      throw ConfigError(os.str());
    }
    if (att_env_lower(i) < 0.0 || att_env_upper(i) < 0.0) {
      std::ostringstream os;
      os << "attitude corridor exceeds its spatial limit on axis " << i;
      throw ConfigError(os.str());
    }
  }
}

void Scenario::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(duration >= dt)) throw ConfigError("duration must be at least dt");
  if (!traj) throw ConfigError("scenario has no trajectory");
  vehicle.validate();
  constraints.validate();
  for (int i = 0; i < 3; ++i) {
    pos_gains[i].validate();
    att_gains[i].validate();
    if (!constraints.pos[i].contains(initial_pos_err[i])) {
      std::ostringstream os;
      os << "initial position error " << initial_pos_err[i] << " on axis " << i
         << " outside corridor (-" << constraints.pos[i].lower << ", "
         << constraints.pos[i].upper << ")";
      throw ConfigError(os.str());
    }
    if (!constraints.att[i].contains(initial_att_err[i])) {
      std::ostringstream os;
      os << "initial attitude error " << initial_att_err[i] << " on axis " << i
         << " outside corridor";
      throw ConfigError(os.str());
    }
  }
  if (!(estimator_tau > 0.0))
    throw ConfigError("estimator time constant must be positive");

  // Sampled envelope validation of the reference trajectory (the roll/pitch
  // channels of the built-in paths are produced at runtime and checked by
  // the simulation instead).
  if (!(start >= 0.0)) throw ConfigError("start offset must be >= 0");
  const long steps = static_cast<long>(std::llround(duration / dt));
  const long stride = steps > 20000 ? steps / 20000 : 1;
  for (long n = 0; n <= steps; n += stride) {
    const double t = start + static_cast<double>(n) * dt;
    const TrajectorySample s = traj(t);
    for (int i = 0; i < 3; ++i) {
      if (!std::isfinite(s.p_d[i]) || !std::isfinite(s.p_d_dot[i]) ||
          !std::isfinite(s.p_d_ddot[i]))
        throw ConfigError("trajectory sample not finite");
      if (s.p_d[i] < -constraints.pos_env_lower(i) ||
          s.p_d[i] > constraints.pos_env_upper(i)) {
        std::ostringstream os;
        os << "desired position leaves its envelope on axis " << i << " at t="
           << t << " (value " << s.p_d[i] << ", envelope ["
           << -constraints.pos_env_lower(i) << ", "
           << constraints.pos_env_upper(i) << "])";
        throw ConfigError(os.str());
      }
    }
    const int checked_att_start = roll_pitch_from_outer ? ATT_YAW : ATT_ROLL;
    for (int k = checked_att_start; k < 3; ++k) {
      if (s.theta_d[k] < -constraints.att_env_lower(k) ||
          s.theta_d[k] > constraints.att_env_upper(k)) {
        std::ostringstream os;
        os << "desired attitude leaves its envelope on axis " << k << " at t="
           << t;
        throw ConfigError(os.str());
      }
    }
  }
}

namespace {

Scenario base_scenario() {
  Scenario s;
  for (int i = 0; i < 3; ++i) {
    s.pos_gains[i] = PositionGains{100.0, 5.0};
    s.att_gains[i] = AttitudeGains{100.0, 5.0};
  }
  s.uncertainty.model = UncertaintyModel::kPhysical;
  s.uncertainty.h0 = Vec3{0.2, 0.2, 0.2};
  return s;
}

}  // namespace

Scenario make_orbital_scenario() {
  Scenario s = base_scenario();
  s.name = "orbital";
  s.traj = trajectory_by_name("orbital");
  s.constraints.pos_limit = Vec3{2.2, 3.3, 0.4};
  s.constraints.att_limit = Vec3{0.5, 0.6, 0.2};
  s.constraints.pos[AXIS_X] = AxisBounds{2.2, 0.2};
  // The source table for these corridors labels the second y value as an x
  // bound; it is read here as the y upper bound.
  s.constraints.pos[AXIS_Y] = AxisBounds{1.3, 0.3};
  s.constraints.pos[AXIS_Z] = AxisBounds{0.3, 0.2};
  s.constraints.att[ATT_ROLL] = AxisBounds{0.08, 0.23};
  s.constraints.att[ATT_PITCH] = AxisBounds{0.20, 0.11};
  s.constraints.att[ATT_YAW] = AxisBounds{0.20, 0.20};
  s.initial_pos_err = Vec3{-0.10, -0.10, -0.285};
  s.initial_att_err = Vec3::Zero();
  return s;
}

Scenario make_helix_scenario() {
  Scenario s = base_scenario();
  s.name = "helix";
  s.traj = trajectory_by_name("helix");
  // A |z| < 0.7 limit cannot hold the 0.02 m/s climb beyond t = 30 s; the
  // limit is widened so the 60 s reference stays inside its envelope. The
  // tracking-error corridor itself is unchanged.
  s.constraints.pos_limit = Vec3{2.2, 3.3, 1.6};
  s.constraints.att_limit = Vec3{0.5, 0.6, 0.2};
  s.constraints.pos[AXIS_X] = AxisBounds{2.2, 0.2};
  s.constraints.pos[AXIS_Y] = AxisBounds{2.3, 0.3};
  s.constraints.pos[AXIS_Z] = AxisBounds{0.6, 0.2};
  s.constraints.att[ATT_ROLL] = AxisBounds{0.08, 0.23};
  s.constraints.att[ATT_PITCH] = AxisBounds{0.20, 0.11};
  s.constraints.att[ATT_YAW] = AxisBounds{0.20, 0.20};
  s.initial_pos_err = Vec3{-0.05, -0.05, -0.30};
  s.initial_att_err = Vec3::Zero();
  return s;
}

Scenario make_bow_scenario() {
  Scenario s = base_scenario();
  s.name = "bow";
  s.traj = trajectory_by_name("bow");
  // A |z| < 0.4 limit conflicts with the z corridor lower bound of 0.6; the
  // limit is raised to keep the corridor construction consistent.
  s.constraints.pos_limit = Vec3{2.2, 2.8, 0.7};
  s.constraints.att_limit = Vec3{2.2, 0.6, 0.2};
  s.constraints.pos[AXIS_X] = AxisBounds{2.2, 0.2};
  s.constraints.pos[AXIS_Y] = AxisBounds{1.3, 0.3};
  s.constraints.pos[AXIS_Z] = AxisBounds{0.6, 0.2};
  s.constraints.att[ATT_ROLL] = AxisBounds{0.25, 0.20};
  s.constraints.att[ATT_PITCH] = AxisBounds{0.20, 0.11};
  s.constraints.att[ATT_YAW] = AxisBounds{0.20, 0.20};
  s.initial_pos_err = Vec3{-0.05, -0.05, -0.30};
  s.initial_att_err = Vec3::Zero();
  return s;
}

Scenario scenario_by_name(const std::string& name) {
  if (name == "orbital") return make_orbital_scenario();
  if (name == "helix") return make_helix_scenario();
  if (name == "bow") return make_bow_scenario();
  throw ConfigError("unknown scenario: " + name);
}

}  // namespace blfquad
