#pragma once

#include "blfquad/types.hpp"

namespace blfquad {

/// One classical 4th-order Runge-Kutta step of x' = f(t, x).
template <typename Deriv>
VecX rk4_step(const VecX& x, double t, double dt, Deriv&& f) {
  const VecX k1 = f(t, x);
  const VecX k2 = f(t + 0.5 * dt, VecX(x + 0.5 * dt * k1));
  const VecX k3 = f(t + 0.5 * dt, VecX(x + 0.5 * dt * k2));
  const VecX k4 = f(t + dt, VecX(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace blfquad
