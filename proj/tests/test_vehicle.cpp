#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "blfquad/vehicle.hpp"

using namespace blfquad;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle: compose the three elementary axis rotations.
Mat3 rot_x(double a) {
  Mat3 m;
  m << 1, 0, 0, 0, std::cos(a), std::sin(a), 0, -std::sin(a), std::cos(a);
  return m;
}
Mat3 rot_y(double a) {
  Mat3 m;
  m << std::cos(a), 0, -std::sin(a), 0, 1, 0, std::sin(a), 0, std::cos(a);
  return m;
}
Mat3 rot_z(double a) {
  Mat3 m;
  m << std::cos(a), std::sin(a), 0, -std::sin(a), std::cos(a), 0, 0, 0, 1;
  return m;
}

VehicleParams pelican() { return VehicleParams{}; }

}  // namespace

TEST_CASE("rotation matrix at zero attitude is the identity") {
  const Mat3 R = rotation_matrix(Vec3::Zero());
  CHECK((R - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("rotation matrix for a pure yaw quarter turn") {
  const Mat3 R = rotation_matrix(Vec3{0.0, 0.0, kPi / 2});
  Mat3 expect;
  expect << 0, 1, 0, -1, 0, 0, 0, 0, 1;
  CHECK((R - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("rotation matrix matches the axis-composition oracle") {
  const Vec3 angles{0.1, 0.2, 0.3};
  const Mat3 expect = rot_x(0.1) * rot_y(0.2) * rot_z(0.3);
  CHECK((rotation_matrix(angles) - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("rotation matrices are orthonormal with unit determinant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> tilt(-kPi / 2 + 1e-6, kPi / 2 - 1e-6);
  std::uniform_real_distribution<double> yaw(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const Mat3 R = rotation_matrix(Vec3{tilt(rng), tilt(rng), yaw(rng)});
    CHECK((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(R.determinant() - 1.0) < 1e-12);
  }
}

TEST_CASE("rotation matrix rejects attitudes outside the model domain") {
  CHECK_THROWS_AS(rotation_matrix(Vec3{kPi / 2, 0, 0}), ModelDomainError);
  CHECK_THROWS_AS(rotation_matrix(Vec3{0, -1.6, 0}), ModelDomainError);
}

TEST_CASE("euler rate transform is the identity at level attitude") {
  const Vec3 omega{0.3, -0.2, 0.5};
  CHECK((euler_rate_transform(Vec3::Zero(), omega) - omega).norm() < 1e-15);
}

TEST_CASE("euler rate transform at 45 degree roll") {
  const Vec3 rates = euler_rate_transform(Vec3{kPi / 4, 0, 0}, Vec3{0, 1, 0});
  CHECK(rates[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rates[1] == doctest::Approx(std::cos(kPi / 4)).epsilon(1e-12));
  CHECK(rates[2] == doctest::Approx(std::sin(kPi / 4)).epsilon(1e-12));
}

TEST_CASE("euler rate transform flags the pitch singularity") {
  CHECK_THROWS_AS(euler_rate_transform(Vec3{0, kPi / 2 - 1e-9, 0}, Vec3{0, 1, 0}),
                  SingularityError);
  CHECK_THROWS_AS(euler_rate_transform(Vec3{0, -(kPi / 2 - 1e-7), 0}, Vec3{0, 1, 0}),
                  SingularityError);
  CHECK_NOTHROW(euler_rate_transform(Vec3{0, kPi / 2 - 1e-5, 0}, Vec3{0, 1, 0}));
}

TEST_CASE("symmetric rotor spin produces pure thrust") {
  const VehicleParams p = pelican();
  const double w = 250.0;
  const Vec4 u = mix_forward(Vec4{w, w, w, w}, p);
  CHECK(u[0] == doctest::Approx(4.0 * p.C_T * w * w).epsilon(1e-14));
  CHECK(std::abs(u[1]) < 1e-12);
  CHECK(std::abs(u[2]) < 1e-12);
  CHECK(std::abs(u[3]) < 1e-12);
}

TEST_CASE("opposite-pair spin produces thrust and yaw moment only") {
  const VehicleParams p = pelican();
  const double a = 300.0;
  // Direct matrix-vector product oracle on the rotor pattern (0, a, 0, a).
  const Vec4 u = mix_forward(Vec4{0.0, a, 0.0, a}, p);
  CHECK(u[0] == doctest::Approx(2.0 * p.C_T * a * a).epsilon(1e-14));
  CHECK(std::abs(u[1]) < 1e-12);
  CHECK(std::abs(u[2]) < 1e-12);
  CHECK(u[3] == doctest::Approx(2.0 * p.C_Q * a * a).epsilon(1e-14));
}

TEST_CASE("allocation inverts the mixer on feasible demands") {
  const VehicleParams p = pelican();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> speed(0.0, 900.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec4 omega{speed(rng), speed(rng), speed(rng), speed(rng)};
    const Vec4 u = mix_forward(omega, p);
    const RotorAllocation alloc = allocate_rotors(u, p);
    const Vec4 back = mix_forward(alloc.omega, p);
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(back[j] - u[j]) <= 1e-9 * std::max(1.0, std::abs(u[j])));
    CHECK(alloc.omega_r == doctest::Approx(alloc.omega[0] - alloc.omega[1] +
                                           alloc.omega[2] - alloc.omega[3]));
  }
}

TEST_CASE("hover allocation for the default airframe") {
  const VehicleParams p = pelican();
  const double hover = p.m * p.g;  // 4.75785 N
  CHECK(hover == doctest::Approx(4.75785).epsilon(1e-9));
  const RotorAllocation alloc = allocate_rotors(Vec4{hover, 0, 0, 0}, p);
  const double expect = std::sqrt(hover / (4.0 * p.C_T));
  for (int i = 0; i < 4; ++i)
    CHECK(alloc.omega[i] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(alloc.omega[0] == doctest::Approx(199.65).epsilon(1e-4));
  CHECK(std::abs(alloc.omega_r) < 1e-12);
}

TEST_CASE("unit allocation example") {
  VehicleParams p = pelican();
  const RotorAllocation alloc = allocate_rotors(Vec4{4.0 * p.C_T, 0, 0, 0}, p);
  for (int i = 0; i < 4; ++i) CHECK(alloc.omega[i] == doctest::Approx(1.0));
}

TEST_CASE("pure moment without thrust is infeasible") {
  CHECK_THROWS_AS(allocate_rotors(Vec4{0.0, 0.5, 0.0, 0.0}, pelican()),
                  InfeasibleAllocationError);
}

TEST_CASE("hover thrust balances gravity") {
  VehicleParams p = pelican();
  RigidState st;
  st.theta = Vec3{0.0, 0.0, 0.7};
  const Vec3 acc = translational_accel(st, p.m * p.g, p);
  CHECK(acc.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero thrust gives free fall") {
  VehicleParams p = pelican();
  RigidState st;
  const Vec3 acc = translational_accel(st, 0.0, p);
  CHECK(acc[0] == 0.0);
  CHECK(acc[1] == 0.0);
  CHECK(acc[2] == doctest::Approx(-p.g));
}

TEST_CASE("pitched hover thrust tips the acceleration forward") {
  // Hand substitution at theta = 0.1, psi = 0, no drag:
  //   xddot = g sin(0.1), zddot = g (cos(0.1) - 1).
  VehicleParams p = pelican();
  p.K_drag.setZero();
  RigidState st;
  st.theta = Vec3{0.0, 0.1, 0.0};
  const Vec3 acc = translational_accel(st, p.m * p.g, p);
  CHECK(acc[0] == doctest::Approx(p.g * std::sin(0.1)).epsilon(1e-12));
  CHECK(acc[0] == doctest::Approx(0.97937).epsilon(1e-4));
  CHECK(std::abs(acc[1]) < 1e-15);
  CHECK(acc[2] == doctest::Approx(p.g * (std::cos(0.1) - 1.0)).epsilon(1e-12));
  CHECK(acc[2] == doctest::Approx(-0.04901).epsilon(1e-3));
}

TEST_CASE("tilted hover keeps zero vertical acceleration") {
  VehicleParams p = pelican();
  p.K_drag.setZero();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> tilt(-1.3, 1.3);
  for (int i = 0; i < 1000; ++i) {
    RigidState st;
    st.theta = Vec3{tilt(rng), tilt(rng), tilt(rng)};
    const double u_T =
        p.m * p.g / (std::cos(st.theta[0]) * std::cos(st.theta[1]));
    CHECK(std::abs(translational_accel(st, u_T, p)[2]) < 1e-12 * p.g * 10);
  }
}

TEST_CASE("attitude channel is at rest with zero rates and inputs") {
  RigidState st;
  const Vec3 acc = attitude_accel(st, Vec3::Zero(), 0.0, pelican(), Vec3::Zero());
  CHECK(acc.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("roll acceleration from the inertia coupling term") {
  // With unit pitch and yaw rates, no rotor coupling and no input, the roll
  // acceleration equals (Jyy - Jzz)/Jxx.
  const VehicleParams p = pelican();
  RigidState st;
  st.theta_dot = Vec3{0.0, 1.0, 1.0};
  const Vec3 acc = attitude_accel(st, Vec3::Zero(), 0.0, p, Vec3::Zero());
  const double xi1 = (p.J_nominal[1] - p.J_nominal[2]) / p.J_nominal[0];
  CHECK(acc[0] == doctest::Approx(xi1).epsilon(1e-12));
  CHECK(acc[0] == doctest::Approx(-0.38235).epsilon(1e-4));
}

TEST_CASE("matched lateral inertias decouple yaw acceleration") {
  VehicleParams p = pelican();
  p.J_nominal = Vec3{3.4e-3, 3.4e-3, 4.7e-3};  // Jxx == Jyy
  RigidState st;
  st.theta_dot = Vec3{2.0, -1.5, 0.7};
  const Vec3 h{0.0, 0.0, 0.3};
  const Vec3 acc = attitude_accel(st, Vec3{0, 0, 0.02}, 0.5, p, h);
  CHECK(acc[2] == doctest::Approx(0.02 / p.J_nominal[2] + 0.3).epsilon(1e-12));
}

TEST_CASE("attitude acceleration is linear in the moment with slope 1/J") {
  const VehicleParams p = pelican();
  RigidState st;
  st.theta_dot = Vec3{0.4, -0.3, 0.2};
  for (int k = 0; k < 3; ++k) {
    Vec3 u = Vec3::Zero();
    u[k] = 1.0;
    const Vec3 a1 = attitude_accel(st, u, 0.2, p, Vec3::Zero());
    const Vec3 a0 = attitude_accel(st, Vec3::Zero(), 0.2, p, Vec3::Zero());
    CHECK((a1[k] - a0[k]) == doctest::Approx(1.0 / p.J_nominal[k]).epsilon(1e-12));
  }
}

TEST_CASE("lumped uncertainty vanishes without an inertia delta") {
  const VehicleParams p = pelican();
  CHECK(lumped_uncertainty(Vec3{1, 2, 3}, Vec3{4, 5, 6}, p).norm() == 0.0);
}

TEST_CASE("principal-axis spin with proportional delta has no uncertainty") {
  VehicleParams p = pelican();
  p.J_delta = Vec3{2e-4, 2e-4, 2e-4};
  p.mu = 2e-4;
  const Vec3 h = lumped_uncertainty(Vec3{0.0, 0.0, 1.7}, Vec3::Zero(), p);
  CHECK(h.norm() < 1e-15);
}

TEST_CASE("lumped uncertainty matches the cross-product oracle") {
  VehicleParams p = pelican();
  p.J_delta = Vec3{3.4e-4, -2.0e-4, 4.7e-4};
  p.mu = 4.7e-4;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> rate(-4.0, 4.0);
  const double inv_norm = 1.0 / p.J_nominal.minCoeff();
  for (int i = 0; i < 500; ++i) {
    const Vec3 w{rate(rng), rate(rng), rate(rng)};
    const Vec3 wd{rate(rng), rate(rng), rate(rng)};
    // Brute-force evaluation with explicit components.
    Vec3 expect;
    const Vec3 jd_w{p.J_delta[0] * w[0], p.J_delta[1] * w[1], p.J_delta[2] * w[2]};
    const Vec3 cross{w[1] * jd_w[2] - w[2] * jd_w[1],
                     w[2] * jd_w[0] - w[0] * jd_w[2],
                     w[0] * jd_w[1] - w[1] * jd_w[0]};
    for (int k = 0; k < 3; ++k)
      expect[k] = (-cross[k] - p.J_delta[k] * wd[k]) / p.J_nominal[k];
    const Vec3 h = lumped_uncertainty(w, wd, p);
    CHECK((h - expect).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(h.norm() <= inv_norm * (w.squaredNorm() + wd.norm()) * p.mu + 1e-12);
  }
}

TEST_CASE("perturbed-inertia plant equals the nominal plant plus its lumped term") {
  VehicleParams p = pelican();
  p.J_delta = Vec3{3.4e-4, 3.4e-4, -4.0e-4};
  p.mu = 4.7e-4;
  RigidState st;
  st.theta = Vec3{0.1, -0.2, 0.4};
  st.theta_dot = Vec3{0.8, -0.5, 0.3};
  const Vec3 moments{0.01, -0.02, 0.005};
  const double omega_r = 10.0;
  const Vec3 acc = attitude_accel_perturbed(st, moments, omega_r, p);
  const Vec3 h = lumped_uncertainty(st.theta_dot, acc, p);
  const Vec3 nominal = attitude_accel(st, moments, omega_r, p, h);
  CHECK((acc - nominal).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("vehicle parameter validation") {
  VehicleParams p = pelican();
  p.m = -1.0;
  CHECK_THROWS_WITH_AS(p.validate(), "vehicle mass must be positive", ConfigError);
  p = pelican();
  p.J_delta = Vec3{0.1, 0, 0};  // exceeds mu
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = pelican();
  p.J_delta = Vec3{-4e-3, 0, 0};  // makes Jxx negative
  p.mu = 5e-3;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK_NOTHROW(pelican().validate());
}
