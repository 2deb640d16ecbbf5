#pragma once

#include <utility>

#include "blfquad/barrier.hpp"
#include "blfquad/types.hpp"
#include "blfquad/vehicle.hpp"

namespace blfquad {

/// Gains of one position axis: barrier_gain scales the cubic stabilizing
/// rate, damping_gain the rate-residual feedback. Both strictly positive.
struct PositionGains {
  double barrier_gain = 100.0;  // K
  double damping_gain = 5.0;    // M

  void validate() const {
    if (!(barrier_gain > 0.0) || !(damping_gain > 0.0))
      throw ConfigError("position gains must be strictly positive");
  }
};

/// Snapshot of one position-axis loop, kept for telemetry and verification.
struct PositionLoopState {
  double err = 0.0;       // position tracking error, m
  double err_rate = 0.0;  // its time derivative, m/s
  double zeta = 0.0;      // rate residual err_rate - stabilizing_rate
  double W = 0.0;         // barrier value
  double E = 0.0;         // augmented Lyapunov value W + zeta^2/2
};

/// Per-axis commanded translational acceleration (the virtual control).
///
/// Assembled from the derivation: drag feed-forward on the measured axis
/// velocity, trajectory acceleration feed-forward, the derivative of the
/// stabilizing rate, the barrier gradient term and rate-residual damping.
/// Along the drag-exact error dynamics this makes the augmented Lyapunov
/// value decay at rate barrier_gain*err^4 + damping_gain*zeta^2.
double virtual_control(double err, double err_rate, double v_axis,
                       double traj_accel, const AxisBounds& bounds,
                       const PositionGains& gains, double k_drag, double mass);

/// Convenience: fills the loop snapshot for telemetry.
PositionLoopState position_loop_state(double err, double err_rate,
                                      const AxisBounds& bounds,
                                      const PositionGains& gains);

/// Net thrust realizing the commanded acceleration vector.
double extract_thrust(const Vec3& accel_cmd, const VehicleParams& params);

/// Desired roll and pitch realizing the commanded acceleration at the given
/// yaw. Throws DegenerateThrustError below the thrust threshold and
/// ModelDomainError if the lateral demand exceeds the asin domain by more
/// than numeric noise.
std::pair<double, double> desired_attitude(const Vec3& accel_cmd, double psi_d,
                                           double u_T,
                                           const VehicleParams& params);

/// Forward map from (u_T, roll_d, pitch_d, yaw_d) back to the commanded
/// acceleration vector; the algebraic inverse of the extraction above.
Vec3 accel_from_attitude(double u_T, double phi_d, double theta_d,
                         double psi_d, const VehicleParams& params);

/// Position confinement interval from the initial Lyapunov value and the
/// desired-trajectory envelope (env_lower, env_upper >= 0).
ConfinementInterval position_confinement(const AxisBounds& bounds, double E0,
                                         double env_lower, double env_upper);

}  // namespace blfquad
