#include <doctest.h>

#include <cmath>
#include <random>

#include "blfquad/integrator.hpp"
#include "blfquad/position_control.hpp"

using namespace blfquad;

namespace {

// The published one-line virtual-control expression (drag term on the
// velocity, matching the error dynamics it must cancel against).
double virtual_control_expanded(double g, double gd, double v, double acc_d,
                                const AxisBounds& b, const PositionGains& k,
                                double k_drag, double mass) {
  const int q = g > 0.0 ? 1 : 0;
  const double lo2 = b.lower * b.lower, up2 = b.upper * b.upper, g2 = g * g;
  return k_drag * v / mass + acc_d -
         g * ((1.0 - q) / (lo2 - g2) + q / (up2 - g2)) -
         k.barrier_gain * g2 * gd *
             (3.0 * q * (up2 - lo2) + (3.0 * lo2 - 5.0 * g2)) -
         k.damping_gain *
             (gd + (q * (up2 - g2) + (1.0 - q) * (lo2 - g2)) *
                       k.barrier_gain * g * g2);
}

}  // namespace

TEST_CASE("error-side switch") {
  CHECK(barrier::side(0.5) == 1);
  CHECK(barrier::side(0.0) == 0);
  CHECK(barrier::side(-0.3) == 0);
}

TEST_CASE("stabilizing rate examples") {
  const AxisBounds b{2.2, 0.2};
  CHECK(barrier::stabilizing_rate(0.0, b, 100.0) == 0.0);
  // gamma = 0.1: -(0.04 - 0.01) * 100 * 0.001
  CHECK(barrier::stabilizing_rate(0.1, b, 100.0) ==
        doctest::Approx(-0.003).epsilon(1e-12));
  // gamma = -0.1: -(4.84 - 0.01) * 100 * (-0.001)
  CHECK(barrier::stabilizing_rate(-0.1, b, 100.0) ==
        doctest::Approx(0.483).epsilon(1e-12));
  CHECK_THROWS_AS(barrier::stabilizing_rate(0.2, b, 100.0), BoundViolationError);
  CHECK_THROWS_AS(barrier::stabilizing_rate(-2.2, b, 100.0), BoundViolationError);
}

TEST_CASE("stabilizing rate and barrier value are continuous across zero") {
  const AxisBounds b{2.2, 0.2};
  CHECK(std::abs(barrier::value(1e-12, b)) < 1e-20);
  CHECK(std::abs(barrier::value(-1e-12, b)) < 1e-20);
  CHECK(std::abs(barrier::stabilizing_rate(1e-12, b, 100.0)) < 1e-20);
  CHECK(std::abs(barrier::stabilizing_rate(-1e-12, b, 100.0)) < 1e-20);
}

TEST_CASE("barrier value examples") {
  const AxisBounds b{2.2, 0.2};
  CHECK(barrier::value(0.0, b) == 0.0);
  // 0.5 ln(0.04 / 0.03)
  CHECK(barrier::value(0.1, b) == doctest::Approx(0.14384103622589).epsilon(1e-12));
  const double near = barrier::value(0.2 * (1.0 - 1e-9), b);
  CHECK(near > 10.0 * barrier::value(0.1, b));
  // The gradient carries the hard blowup near the bound.
  CHECK(0.2 * barrier::gradient_factor(0.2 * (1 - 1e-9), b) >
        1e4 * 0.1 * barrier::gradient_factor(0.1, b));
  CHECK_THROWS_AS(barrier::value(0.2, b), BoundViolationError);
}

TEST_CASE("stabilizing-rate derivative matches a central difference") {
  const AxisBounds b{1.3, 0.3};
  const double gain = 100.0;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double a = 0.05 + 0.1 * std::abs(unit(rng));
    const double c = unit(rng);
    const double t = unit(rng);
    const double h = 1e-6;
    auto err_at = [&](double tt) { return a * std::sin(tt + c); };
    const double fd = (barrier::stabilizing_rate(err_at(t + h), b, gain) -
                       barrier::stabilizing_rate(err_at(t - h), b, gain)) /
                      (2.0 * h);
    const double formula = barrier::stabilizing_rate_dot(
        err_at(t), a * std::cos(t + c), b, gain);
    CHECK(std::abs(fd - formula) <= 1e-6 * std::max(1.0, std::abs(formula)));
  }
}

TEST_CASE("virtual control at the origin is zero") {
  const AxisBounds b{2.2, 0.2};
  const PositionGains k{100.0, 5.0};
  CHECK(virtual_control(0.0, 0.0, 0.0, 0.0, b, k, 0.0, 0.485) == 0.0);
}

TEST_CASE("virtual control hand-substitution example") {
  // gamma=0.1, rest zero, bounds (2.2, 0.2), K=100, M=5, no drag:
  // delta = -0.1/0.03 - 5*(0.03*100*0.001) = -3.3483...
  const AxisBounds b{2.2, 0.2};
  const PositionGains k{100.0, 5.0};
  const double delta = virtual_control(0.1, 0.0, 0.0, 0.0, b, k, 0.0, 0.485);
  CHECK(delta == doctest::Approx(-0.1 / 0.03 - 0.015).epsilon(1e-12));
  CHECK(delta == doctest::Approx(-3.34833333).epsilon(1e-8));
}

TEST_CASE("virtual control equals the expanded one-line form") {
  const AxisBounds b{1.3, 0.3};
  const PositionGains k{100.0, 5.0};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double g = 0.29 * unit(rng);
    const double gd = 2.0 * unit(rng);
    const double v = 3.0 * unit(rng);
    const double acc = 4.0 * unit(rng);
    const double a = virtual_control(g, gd, v, acc, b, k, 0.01, 0.485);
    const double e = virtual_control_expanded(g, gd, v, acc, b, k, 0.01, 0.485);
    CHECK(std::abs(a - e) <= 1e-12 * std::max(1.0, std::abs(e)));
  }
}

TEST_CASE("loop energy decays at the designed rate along the error dynamics") {
  // Integrate the drag-free error dynamics under the virtual control with a
  // fine step and compare the central difference of the augmented Lyapunov
  // value against -K g^4 - M zeta^2.
  const AxisBounds b{2.2, 0.2};
  const PositionGains k{100.0, 5.0};
  const double dt = 1e-5;
  auto deriv = [&](double, const VecX& s) {
    VecX d(2);
    d[0] = s[1];
    d[1] = virtual_control(s[0], s[1], 0.0, 0.0, b, k, 0.0, 0.485);
    return d;
  };
  VecX s(2);
  s << 0.1, 0.0;
  std::vector<double> E;
  for (int n = 0; n < 400; ++n) {
    E.push_back(barrier::loop_energy(s[0], s[1], b, k.barrier_gain));
    s = rk4_step(s, n * dt, dt, deriv);
  }
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<size_t> pick(1, E.size() - 2);
  // Re-integrate to recover states at sampled instants.
  VecX st(2);
  st << 0.1, 0.0;
  std::vector<std::pair<double, double>> states;
  for (int n = 0; n < 400; ++n) {
    states.emplace_back(st[0], st[1]);
    st = rk4_step(st, n * dt, dt, deriv);
  }
  for (int i = 0; i < 40; ++i) {
    const size_t n = pick(rng);
    const double fd = (E[n + 1] - E[n - 1]) / (2.0 * dt);
    const double g = states[n].first;
    const double zeta =
        barrier::rate_residual(g, states[n].second, b, k.barrier_gain);
    const double rhs = -k.barrier_gain * g * g * g * g -
                       k.damping_gain * zeta * zeta;
    CHECK(std::abs(fd - rhs) <= std::max(1e-6, 1e-3 * std::abs(rhs)));
  }
}

TEST_CASE("closed-loop error stays inside the corridor and energy decays") {
  const AxisBounds b{0.3, 0.2};
  const PositionGains k{100.0, 5.0};
  const double dt = 1e-4;
  auto deriv = [&](double, const VecX& s) {
    VecX d(2);
    d[0] = s[1];
    d[1] = virtual_control(s[0], s[1], 0.0, 0.0, b, k, 0.0, 0.485);
    return d;
  };
  // Sweep admissible starts, including deep on either side of the corridor.
  const double starts[][2] = {{-0.25, 0.0}, {-0.1, 0.3}, {0.15, 0.0},
                              {0.18, -0.2}, {0.05, 0.5},  {-0.29, 0.1}};
  for (const auto& ic : starts) {
    VecX s(2);
    s << ic[0], ic[1];
    double prev = barrier::loop_energy(s[0], s[1], b, k.barrier_gain);
    for (int n = 0; n < 30000; ++n) {
      s = rk4_step(s, n * dt, dt, deriv);
      REQUIRE(b.contains(s[0]));
      const double E = barrier::loop_energy(s[0], s[1], b, k.barrier_gain);
      REQUIRE(E <= prev + 1e-9);
      prev = E;
    }
    CHECK(std::abs(s[0]) < 1e-3);
  }
}

TEST_CASE("thrust extraction examples") {
  const VehicleParams p;
  CHECK(extract_thrust(Vec3::Zero(), p) == doctest::Approx(4.75785).epsilon(1e-9));
  CHECK(extract_thrust(Vec3{0, 0, -p.g}, p) == 0.0);
}

TEST_CASE("desired attitude examples") {
  const VehicleParams p;
  SUBCASE("hover") {
    const double u_T = extract_thrust(Vec3::Zero(), p);
    const auto [phi, theta] = desired_attitude(Vec3::Zero(), 0.0, u_T, p);
    CHECK(phi == 0.0);
    CHECK(theta == 0.0);
  }
  SUBCASE("forward demand pitches the nose") {
    const Vec3 d{1.0, 0.0, 0.0};
    const double u_T = extract_thrust(d, p);
    const auto [phi, theta] = desired_attitude(d, 0.0, u_T, p);
    CHECK(phi == 0.0);
    CHECK(theta == doctest::Approx(std::atan2(1.0, p.g)).epsilon(1e-12));
    CHECK(theta == doctest::Approx(0.101586).epsilon(1e-4));
  }
  SUBCASE("lateral demand rolls away from it") {
    const Vec3 d{0.0, 1.0, 0.0};
    const double u_T = extract_thrust(d, p);
    const auto [phi, theta] = desired_attitude(d, 0.0, u_T, p);
    CHECK(phi < 0.0);
    CHECK(phi == doctest::Approx(std::asin(-p.m / u_T)).epsilon(1e-12));
    CHECK(theta == 0.0);
  }
}

TEST_CASE("desired attitude degenerate and domain errors") {
  const VehicleParams p;
  CHECK_THROWS_AS(desired_attitude(Vec3{0, 0, -p.g}, 0.0, 1e-9, p),
                  DegenerateThrustError);
  // An inconsistent thrust magnitude pushes the asin argument past 1.
  CHECK_THROWS_AS(desired_attitude(Vec3{0.0, 5.0, -p.g}, 0.0, 1.0, p),
                  ModelDomainError);
}

TEST_CASE("tilt extraction round-trips the acceleration command") {
  const VehicleParams p;
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> amp(-5.0, 5.0);
  std::uniform_real_distribution<double> yaw(-3.14, 3.14);
  int done = 0;
  while (done < 10000) {
    const Vec3 d{amp(rng), amp(rng), amp(rng)};
    const double psi = yaw(rng);
    const double u_T = extract_thrust(d, p);
    if (u_T < 1e-3) continue;
    const double arg =
        p.m * (d[0] * std::sin(psi) - d[1] * std::cos(psi)) / u_T;
    if (std::abs(arg) > 1.0 - 1e-6) continue;
    const auto [phi, theta] = desired_attitude(d, psi, u_T, p);
    const Vec3 back = accel_from_attitude(u_T, phi, theta, psi, p);
    CHECK((back - d).cwiseAbs().maxCoeff() <=
          1e-9 * std::max(1.0, d.cwiseAbs().maxCoeff()));
    ++done;
  }
}

TEST_CASE("confinement interval examples") {
  const AxisBounds b{2.2, 0.2};
  SUBCASE("zero initial energy confines to the reference envelope") {
    const ConfinementInterval c = position_confinement(b, 0.0, 0.5, 0.5);
    CHECK(c.H_lower == 0.0);
    CHECK(c.H_upper == 0.0);
    CHECK(c.lo == -0.5);
    CHECK(c.hi == 0.5);
  }
  SUBCASE("large initial energy approaches the corridor itself") {
    const ConfinementInterval c = position_confinement(b, 300.0, 0.0, 0.0);
    CHECK(c.H_lower == doctest::Approx(2.2).epsilon(1e-12));
    CHECK(c.H_upper == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("hand-substitution value") {
    const ConfinementInterval c = position_confinement(b, 0.5, 0.0, 0.0);
    CHECK(c.H_upper ==
          doctest::Approx(0.2 * std::sqrt(1.0 - std::exp(-1.0))).epsilon(1e-12));
    CHECK(c.H_upper == doctest::Approx(0.159012).epsilon(1e-4));
  }
  CHECK_THROWS_AS(position_confinement(b, -0.1, 0, 0), ConfigError);
}

TEST_CASE("loop state snapshot is consistent") {
  const AxisBounds b{1.3, 0.3};
  const PositionGains k{100.0, 5.0};
  const PositionLoopState s = position_loop_state(0.1, -0.2, b, k);
  CHECK(s.zeta ==
        doctest::Approx(-0.2 - barrier::stabilizing_rate(0.1, b, 100.0)));
  CHECK(s.E == doctest::Approx(s.W + 0.5 * s.zeta * s.zeta));
}
