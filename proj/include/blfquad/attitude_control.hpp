#pragma once

#include "blfquad/barrier.hpp"
#include "blfquad/types.hpp"

namespace blfquad {

/// Gains of one attitude axis, mirroring the position pair.
struct AttitudeGains {
  double barrier_gain = 100.0;  // Z
  double damping_gain = 5.0;    // N

  void validate() const {
    if (!(barrier_gain > 0.0) || !(damping_gain > 0.0))
      throw ConfigError("attitude gains must be strictly positive");
  }
};

/// Adaptive compensation state of one attitude axis. adaptive_gain tracks the
/// unknown matched-disturbance magnitude, estimate is the pluggable
/// observer's current disturbance estimate.
struct AdaptiveState {
  double adaptive_gain = 0.0;  // h_bar
  double estimate = 0.0;       // h_hat, rad/s^2
};

/// Smooth, even, strictly positive regressor of the matched uncertainty:
/// 1 + rate^2. It dominates the quadratic-in-rate growth of the inertia
/// coupling terms.
inline double regressor(double rate) { return 1.0 + rate * rate; }

/// Moment command of one attitude axis. Cancels the drift F, feeds the
/// reference acceleration forward, adds the stabilizing-rate derivative, the
/// disturbance estimate, the adaptive matched-compensation term, residual
/// damping and the barrier gradient. plant_gain is the inverse inertia of
/// the axis; must be nonzero.
double attitude_moment(double err, double err_rate, double rate_k,
                       double traj_accel, double F_k, double plant_gain,
                       double h_hat, double adaptive_gain,
                       const AxisBounds& bounds, const AttitudeGains& gains);

/// Rate of the adaptive gain: residual * regressor(rate_k). Integrated with
/// the same scheme and step as the plant.
double adapt_rate(double err, double err_rate, double rate_k,
                  const AxisBounds& bounds, double barrier_gain);

/// Increment of the adaptive gain over dt under a plain Euler fallback; the
/// simulation folds adapt_rate into its Runge-Kutta state instead.
double adapt_step(double err, double err_rate, double rate_k,
                  const AxisBounds& bounds, double barrier_gain, double dt);

/// Attitude Lyapunov value: asymmetric barrier plus adaptation-error energy.
double attitude_blf(double err, const AxisBounds& bounds, double h_err);

/// Full attitude Lyapunov value including the rate-residual term.
double attitude_loop_energy(double err, double err_rate,
                            const AxisBounds& bounds, double barrier_gain,
                            double h_err);

/// Attitude confinement interval from the initial Lyapunov value and the
/// desired-attitude envelope.
ConfinementInterval attitude_confinement(const AxisBounds& bounds, double D0,
                                         double env_lower, double env_upper);

}  // namespace blfquad
