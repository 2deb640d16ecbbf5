#pragma once

#include <array>
#include <string>

#include "blfquad/attitude_control.hpp"
#include "blfquad/barrier.hpp"
#include "blfquad/position_control.hpp"
#include "blfquad/trajectory.hpp"
#include "blfquad/types.hpp"
#include "blfquad/vehicle.hpp"

namespace blfquad {

/// Spatial limits and the asymmetric tracking-error corridors derived from
/// them. envelope_* are the admissible reference envelopes implied by the
/// corridor construction: env_lower = limit - bound.lower,
/// env_upper = limit - bound.upper.
struct ConstraintSpec {
  Vec3 pos_limit = Vec3::Ones();  // |position| constraint per axis, m
  Vec3 att_limit = Vec3::Ones();  // |attitude| constraint per axis, rad
  std::array<AxisBounds, 3> pos{};
  std::array<AxisBounds, 3> att{};

  double pos_env_lower(int axis) const { return pos_limit[axis] - pos[axis].lower; }
  double pos_env_upper(int axis) const { return pos_limit[axis] - pos[axis].upper; }
  double att_env_lower(int axis) const { return att_limit[axis] - att[axis].lower; }
  double att_env_upper(int axis) const { return att_limit[axis] - att[axis].upper; }

  void validate() const;
};

enum class UncertaintyModel {
  kMatched,   // inject h0 * regressor(rate) at the attitude disturbance slot;
              // translational loop driven by the commanded acceleration
  kPhysical,  // full cascade with the perturbed-inertia truth model
};

struct UncertaintySpec {
  UncertaintyModel model = UncertaintyModel::kPhysical;
  Vec3 J_delta = Vec3::Zero();  // applied to the truth model in physical mode
  Vec3 h0 = Vec3::Zero();       // matched-disturbance magnitudes, rad/s^2
};

struct SaturationSpec {
  bool enabled = true;
  double thrust_max = 15.0;  // N
  double moment_max = 3.0;   // N m per axis
};

enum class EstimatorKind { kZero, kTracker };

struct Scenario {
  std::string name = "orbital";
  double duration = 60.0;
  double dt = 1e-3;
  // Evaluate the reference at (start + t); a nonzero start skips the
  // from-rest blend-in of the built-in paths.
  double start = 0.0;
  TrajectoryFn traj;
  bool roll_pitch_from_outer = true;
  ConstraintSpec constraints;
  std::array<PositionGains, 3> pos_gains{};
  std::array<AttitudeGains, 3> att_gains{};
  Vec3 initial_pos_err = Vec3::Zero();  // gamma(0) per axis
  Vec3 initial_att_err = Vec3::Zero();  // upsilon(0) per axis
  UncertaintySpec uncertainty;
  SaturationSpec saturation;
  EstimatorKind estimator = EstimatorKind::kZero;
  double estimator_tau = 0.05;
  VehicleParams vehicle;

  /// Structural checks plus sampled validation of the reference envelopes
  /// over the whole run. Throws ConfigError on failure.
  void validate() const;
};

/// Built-in scenario fixtures: constraint sets, gains and Pelican vehicle
/// parameters for the three stock paths. Initial tracking errors are
/// defaults chosen admissible for the corridors.
Scenario make_orbital_scenario();
Scenario make_helix_scenario();
Scenario make_bow_scenario();
Scenario scenario_by_name(const std::string& name);

}  // namespace blfquad
