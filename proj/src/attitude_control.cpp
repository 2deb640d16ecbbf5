#include "blfquad/attitude_control.hpp"

#include <cmath>

namespace blfquad {

double attitude_moment(double err, double err_rate, double rate_k,
                       double traj_accel, double F_k, double plant_gain,
                       double h_hat, double adaptive_gain,
                       const AxisBounds& bounds, const AttitudeGains& gains) {
  if (plant_gain == 0.0)
    throw ConfigError("attitude plant gain must be nonzero");
  const double sigma_dot =
      barrier::stabilizing_rate_dot(err, err_rate, bounds, gains.barrier_gain);
  const double lambda =
      barrier::rate_residual(err, err_rate, bounds, gains.barrier_gain);
  const double grad = barrier::gradient_factor(err, bounds);
  return (1.0 / plant_gain) *
         (-F_k + traj_accel + sigma_dot - h_hat -
          adaptive_gain * regressor(rate_k) - gains.damping_gain * lambda -
          err * grad);
}

double adapt_rate(double err, double err_rate, double rate_k,
                  const AxisBounds& bounds, double barrier_gain) {
  const double lambda =
      barrier::rate_residual(err, err_rate, bounds, barrier_gain);
  return lambda * regressor(rate_k);
}

double adapt_step(double err, double err_rate, double rate_k,
                  const AxisBounds& bounds, double barrier_gain, double dt) {
  if (!(dt > 0.0)) throw ConfigError("adaptation step must be positive");
  return adapt_rate(err, err_rate, rate_k, bounds, barrier_gain) * dt;
}

double attitude_blf(double err, const AxisBounds& bounds, double h_err) {
  return barrier::value(err, bounds) + 0.5 * h_err * h_err;
}

double attitude_loop_energy(double err, double err_rate,
                            const AxisBounds& bounds, double barrier_gain,
                            double h_err) {
  const double lambda =
      barrier::rate_residual(err, err_rate, bounds, barrier_gain);
  return attitude_blf(err, bounds, h_err) + 0.5 * lambda * lambda;
}

ConfinementInterval attitude_confinement(const AxisBounds& bounds, double D0,
                                         double env_lower, double env_upper) {
  return confinement_interval(bounds, D0, env_lower, env_upper);
}

}  // namespace blfquad
