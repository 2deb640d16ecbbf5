#pragma once

#include <functional>
#include <string>

#include "blfquad/types.hpp"

namespace blfquad {

/// Desired position/attitude and their first two time derivatives at one
/// instant. For the built-in paths only the yaw channel of the attitude
/// block is analytic; desired roll/pitch are produced by the outer loop at
/// runtime and left zero here.
struct TrajectorySample {
  Vec3 p_d = Vec3::Zero();
  Vec3 p_d_dot = Vec3::Zero();
  Vec3 p_d_ddot = Vec3::Zero();
  Vec3 theta_d = Vec3::Zero();
  Vec3 theta_d_dot = Vec3::Zero();
  Vec3 theta_d_ddot = Vec3::Zero();
};

using TrajectoryFn = std::function<TrajectorySample(double)>;

/// Orbit around a fixed point with a gentle vertical bob; the transient
/// factor (1 - e^{-c t^3}) blends in from rest.
TrajectorySample scenario_orbital(double t);

/// Same lateral orbit with a linear climb (0.02 m/s).
TrajectorySample scenario_helix(double t);

/// Bow-shaped figure with a cosine vertical profile.
TrajectorySample scenario_bow(double t);

/// Per-axis sinusoid family for user-defined paths:
/// value = offset + amp * sin(freq * t + phase), yaw alike.
struct SinusoidSpec {
  double offset = 0.0;
  double amp = 0.0;
  double freq = 1.0;
  double phase = 0.0;
};

struct CustomTrajectorySpec {
  SinusoidSpec x, y, z, psi;
  // Optional analytic roll/pitch references (used by matched-model runs that
  // bypass the outer-loop extraction).
  bool analytic_roll_pitch = false;
  SinusoidSpec phi, theta;
};

TrajectoryFn make_custom_trajectory(const CustomTrajectorySpec& spec);

TrajectoryFn trajectory_by_name(const std::string& name);

}  // namespace blfquad
