#pragma once

#include <cmath>
#include <sstream>

#include "blfquad/errors.hpp"
#include "blfquad/types.hpp"

namespace blfquad {

/// Asymmetric error corridor: a tracking error is admissible while it stays
/// strictly inside (-lower, upper). Both magnitudes are positive.
struct AxisBounds {
  double lower = 1.0;
  double upper = 1.0;

  void validate() const {
    if (!(lower > 0.0) || !(upper > 0.0))
      throw ConfigError("error bounds must be strictly positive");
  }

  bool contains(double err) const { return err > -lower && err < upper; }
};

namespace barrier {

/// Side switch: 1 on the positive-error branch, 0 otherwise.
inline int side(double err) { return err > 0.0 ? 1 : 0; }

inline void require_inside(double err, const AxisBounds& b, const char* what) {
  if (!b.contains(err)) {
    std::ostringstream os;
    os << what << " error " << err << " outside barrier interval (-" << b.lower
       << ", " << b.upper << ")";
    throw BoundViolationError(os.str());
  }
}

/// Log-barrier value. Zero at the origin, diverges at either bound; the two
/// branches agree (both vanish) at err = 0.
inline double value(double err, const AxisBounds& b) {
  require_inside(err, b, "barrier");
  const double e2 = err * err;
  if (side(err)) {
    const double u2 = b.upper * b.upper;
    return 0.5 * std::log(u2 / (u2 - e2));
  }
  const double l2 = b.lower * b.lower;
  return 0.5 * std::log(l2 / (l2 - e2));
}

/// Factor multiplying the error in the barrier gradient:
/// d(value)/d(err) = err * gradient_factor(err).
inline double gradient_factor(double err, const AxisBounds& b) {
  require_inside(err, b, "barrier");
  const double e2 = err * err;
  const double bound = side(err) ? b.upper : b.lower;
  return 1.0 / (bound * bound - e2);
}

/// Raw stabilizing-rate polynomial (well defined for any err; integrator
/// substeps may evaluate it during trial excursions).
inline double stabilizing_rate_poly(double err, const AxisBounds& b,
                                    double gain) {
  const double e2 = err * err;
  const double bound = side(err) ? b.upper : b.lower;
  return -(bound * bound - e2) * gain * err * err * err;
}

/// Stabilizing error-rate (the backstepping first-stage target):
///   -[s*(up^2 - e^2) + (1-s)*(lo^2 - e^2)] * gain * e^3.
inline double stabilizing_rate(double err, const AxisBounds& b, double gain) {
  require_inside(err, b, "barrier");
  return stabilizing_rate_poly(err, b, gain);
}

inline double stabilizing_rate_dot_poly(double err, double err_rate,
                                        const AxisBounds& b, double gain) {
  const double e2 = err * err;
  const double l2 = b.lower * b.lower;
  const double u2 = b.upper * b.upper;
  const double bracket = 3.0 * side(err) * (u2 - l2) + 3.0 * l2 - 5.0 * e2;
  return -gain * e2 * err_rate * bracket;
}

/// Time derivative of stabilizing_rate along (err, err_rate):
///   -gain * e^2 * edot * [3*s*(up^2 - lo^2) + 3*lo^2 - 5*e^2].
inline double stabilizing_rate_dot(double err, double err_rate,
                                   const AxisBounds& b, double gain) {
  require_inside(err, b, "barrier");
  return stabilizing_rate_dot_poly(err, err_rate, b, gain);
}

inline double rate_residual_poly(double err, double err_rate,
                                 const AxisBounds& b, double gain) {
  return err_rate - stabilizing_rate_poly(err, b, gain);
}

/// Residual of the second backstepping stage: err_rate - stabilizing_rate.
inline double rate_residual(double err, double err_rate, const AxisBounds& b,
                            double gain) {
  require_inside(err, b, "barrier");
  return rate_residual_poly(err, err_rate, b, gain);
}

/// Augmented Lyapunov value: barrier + residual energy.
inline double loop_energy(double err, double err_rate, const AxisBounds& b,
                          double gain) {
  const double zeta = rate_residual(err, err_rate, b, gain);
  return value(err, b) + 0.5 * zeta * zeta;
}

/// Reachable-error radius from an initial Lyapunov level: the error never
/// exceeds bound * sqrt(1 - exp(-2 E0)) on the corresponding side.
inline double level_radius(double bound, double initial_energy) {
  return bound * std::sqrt(1.0 - std::exp(-2.0 * initial_energy));
}

}  // namespace barrier

/// Level-set confinement interval: a non-increasing Lyapunov value started
/// at E0 keeps the state inside (lo, hi) = (-H_lower - env_lower,
/// H_upper + env_upper), where H = bound * sqrt(1 - e^{-2 E0}).
struct ConfinementInterval {
  double H_lower = 0.0;
  double H_upper = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x > lo && x < hi; }
};

inline ConfinementInterval confinement_interval(const AxisBounds& b, double E0,
                                                double env_lower,
                                                double env_upper) {
  if (!(E0 >= 0.0)) throw ConfigError("initial Lyapunov value must be >= 0");
  ConfinementInterval c;
  c.H_lower = barrier::level_radius(b.lower, E0);
  c.H_upper = barrier::level_radius(b.upper, E0);
  c.lo = -c.H_lower - env_lower;
  c.hi = c.H_upper + env_upper;
  return c;
}

}  // namespace blfquad
