#include <doctest.h>

#include <cmath>

#include "blfquad/integrator.hpp"

using namespace blfquad;

TEST_CASE("one step of exponential decay reproduces the classical tableau") {
  VecX x(1);
  x << 1.0;
  auto deriv = [](double, const VecX& s) {
    VecX d(1);
    d << -s[0];
    return d;
  };
  x = rk4_step(x, 0.0, 0.1, deriv);
  CHECK(x[0] == doctest::Approx(0.9048375).epsilon(1e-12));
}

TEST_CASE("free fall is exact for polynomial dynamics") {
  const double g = 9.81;
  VecX x(2);
  x << 0.0, 0.0;  // z, zdot
  auto deriv = [g](double, const VecX& s) {
    VecX d(2);
    d << s[1], -g;
    return d;
  };
  for (int n = 0; n < 100; ++n) x = rk4_step(x, 0.01 * n, 0.01, deriv);
  CHECK(std::abs(x[0] - (-0.5 * g)) < 1e-8);
}

TEST_CASE("halving the step shrinks the terminal error about sixteenfold") {
  auto deriv = [](double, const VecX& s) {
    VecX d(2);
    d << s[1], -std::sin(s[0]);
    return d;
  };
  auto terminal = [&](double dt) {
    VecX x(2);
    x << 1.0, 0.0;
    const long n = std::lround(2.0 / dt);
    for (long i = 0; i < n; ++i) x = rk4_step(x, i * dt, dt, deriv);
    return x[0];
  };
  const double ref = terminal(1e-5);
  const double e1 = std::abs(terminal(0.05) - ref);
  const double e2 = std::abs(terminal(0.025) - ref);
  CHECK(e1 / e2 >= 15.0);
}
