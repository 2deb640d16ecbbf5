#include "blfquad/vehicle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace blfquad {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kPitchSingularityMargin = 1e-6;

void check_attitude_domain(const Vec3& theta) {
  if (!(std::abs(theta[ATT_ROLL]) < kHalfPi) ||
      !(std::abs(theta[ATT_PITCH]) < kHalfPi)) {
    std::ostringstream os;
    os << "attitude outside model domain: roll=" << theta[ATT_ROLL]
       << " pitch=" << theta[ATT_PITCH] << " (|.| must be < pi/2)";
    throw ModelDomainError(os.str());
  }
}

}  // namespace

void VehicleParams::validate() const {
  if (!(m > 0.0)) throw ConfigError("vehicle mass must be positive");
  if (!(d > 0.0)) throw ConfigError("arm length must be positive");
  if (!(C_T > 0.0)) throw ConfigError("thrust coefficient must be positive");
  if (!(C_Q > 0.0)) throw ConfigError("moment coefficient must be positive");
  if (!(J_r >= 0.0)) throw ConfigError("rotor inertia must be non-negative");
  if (!(g > 0.0)) throw ConfigError("gravity must be positive");
  for (int i = 0; i < 3; ++i) {
    if (!(J_nominal[i] > 0.0))
      throw ConfigError("nominal inertia entries must be positive");
    if (!(J_nominal[i] + J_delta[i] > 0.0))
      throw ConfigError("perturbed inertia must stay positive definite");
    if (!(K_drag[i] >= 0.0))
      throw ConfigError("drag coefficients must be non-negative");
  }
  // Diagonal matrix: the spectral norm is the largest absolute entry.
  const double jd_norm = J_delta.cwiseAbs().maxCoeff();
  if (jd_norm > mu)
    throw ConfigError("inertia perturbation exceeds its declared bound mu");
}

Mat3 rotation_matrix(const Vec3& theta) {
  check_attitude_domain(theta);
  const double cphi = std::cos(theta[ATT_ROLL]), sphi = std::sin(theta[ATT_ROLL]);
  const double cth = std::cos(theta[ATT_PITCH]), sth = std::sin(theta[ATT_PITCH]);
  const double cpsi = std::cos(theta[ATT_YAW]), spsi = std::sin(theta[ATT_YAW]);
  Mat3 R;
  R << cth * cpsi, cth * spsi, -sth,
      sphi * sth * cpsi - cphi * spsi, sphi * sth * spsi + cphi * cpsi, sphi * cth,
      cphi * sth * cpsi + sphi * spsi, cphi * sth * spsi - sphi * cpsi, cphi * cth;
  return R;
}

Vec3 euler_rate_transform(const Vec3& theta, const Vec3& omega_body) {
  if (std::abs(theta[ATT_PITCH]) >= kHalfPi - kPitchSingularityMargin) {
    std::ostringstream os;
    os << "Euler-rate transform singular: |pitch|=" << std::abs(theta[ATT_PITCH])
       << " >= pi/2 - 1e-6";
    throw SingularityError(os.str());
  }
  const double cphi = std::cos(theta[ATT_ROLL]), sphi = std::sin(theta[ATT_ROLL]);
  const double tth = std::tan(theta[ATT_PITCH]);
  const double sec = 1.0 / std::cos(theta[ATT_PITCH]);
  const double p = omega_body[0], q = omega_body[1], r = omega_body[2];
  return Vec3{p + q * tth * sphi + r * tth * cphi,
              q * cphi - r * sphi,
              q * sec * sphi + r * sec * cphi};
}

Vec4 mix_forward(const Vec4& omega, const VehicleParams& params) {
  const Vec4 w2 = omega.array().square();
  const double ct = params.C_T, cq = params.C_Q, d = params.d;
  return Vec4{ct * (w2[0] + w2[1] + w2[2] + w2[3]),
              d * ct * (w2[3] - w2[1]),
              d * ct * (w2[2] - w2[0]),
              cq * (w2[1] + w2[3] - w2[0] - w2[2])};
}

RotorAllocation allocate_rotors(const Vec4& u, const VehicleParams& params) {
  const double ct = params.C_T, cq = params.C_Q, d = params.d;
  const double thrust_share = u[0] / (4.0 * ct);
  const double roll_share = u[1] / (2.0 * d * ct);
  const double pitch_share = u[2] / (2.0 * d * ct);
  const double yaw_share = u[3] / (4.0 * cq);
  Vec4 w2{thrust_share - pitch_share - yaw_share,
          thrust_share - roll_share + yaw_share,
          thrust_share + pitch_share - yaw_share,
          thrust_share + roll_share + yaw_share};
  for (int i = 0; i < 4; ++i) {
    if (w2[i] < 0.0) {
      std::ostringstream os;
      os << "rotor allocation infeasible: omega_" << (i + 1)
         << "^2 = " << w2[i] << " for demand [" << u.transpose() << "]";
      throw InfeasibleAllocationError(os.str());
    }
  }
  RotorAllocation out;
  out.omega = w2.array().sqrt();
  out.omega_r = out.omega[0] - out.omega[1] + out.omega[2] - out.omega[3];
  return out;
}

Vec3 translational_accel(const RigidState& state, double u_T,
                         const VehicleParams& params) {
  check_attitude_domain(state.theta);
  const double cphi = std::cos(state.theta[ATT_ROLL]);
  const double sphi = std::sin(state.theta[ATT_ROLL]);
  const double cth = std::cos(state.theta[ATT_PITCH]);
  const double sth = std::sin(state.theta[ATT_PITCH]);
  const double cpsi = std::cos(state.theta[ATT_YAW]);
  const double spsi = std::sin(state.theta[ATT_YAW]);
  const double a = u_T / params.m;
  return Vec3{
      a * (cphi * sth * cpsi + sphi * spsi) - params.K_drag[0] * state.v[0] / params.m,
      a * (cphi * sth * spsi - sphi * cpsi) - params.K_drag[1] * state.v[1] / params.m,
      a * (cphi * cth) - params.g - params.K_drag[2] * state.v[2] / params.m};
}

AttitudePlantTerms attitude_plant_terms(const Vec3& theta_dot, double omega_r,
                                        const VehicleParams& params) {
  const double jxx = params.J_nominal[0], jyy = params.J_nominal[1],
               jzz = params.J_nominal[2];
  const double xi1 = (jyy - jzz) / jxx;
  const double xi2 = params.J_r / jxx;
  const double xi3 = (jzz - jxx) / jyy;
  const double xi4 = params.J_r / jyy;
  const double xi5 = (jxx - jyy) / jzz;
  const double dphi = theta_dot[ATT_ROLL], dth = theta_dot[ATT_PITCH],
               dpsi = theta_dot[ATT_YAW];
  AttitudePlantTerms out;
  out.F = Vec3{xi1 * dth * dpsi - xi2 * omega_r * dth,
               xi3 * dphi * dpsi + xi4 * omega_r * dphi,
               xi5 * dphi * dth};
  out.G = Vec3{1.0 / jxx, 1.0 / jyy, 1.0 / jzz};
  return out;
}

Vec3 attitude_accel(const RigidState& state, const Vec3& moments,
                    double omega_r, const VehicleParams& params,
                    const Vec3& h_lumped) {
  check_attitude_domain(state.theta);
  const AttitudePlantTerms t = attitude_plant_terms(state.theta_dot, omega_r, params);
  return t.F + t.G.cwiseProduct(moments) + h_lumped;
}

Vec3 lumped_uncertainty(const Vec3& theta_dot, const Vec3& theta_ddot,
                        const VehicleParams& params) {
  const Vec3 jd_w = params.J_delta.cwiseProduct(theta_dot);
  const Vec3 cross = theta_dot.cross(jd_w);
  const Vec3 num = -cross - params.J_delta.cwiseProduct(theta_ddot);
  return num.cwiseQuotient(params.J_nominal);
}

Vec3 attitude_accel_perturbed(const RigidState& state, const Vec3& moments,
                              double omega_r, const VehicleParams& params) {
  check_attitude_domain(state.theta);
  const Vec3 J = params.J_nominal + params.J_delta;
  const Vec3 w = state.theta_dot;
  // tau = u - J_r * [q, -p, 0] * omega_r (gyroscopic rotor moment)
  const Vec3 tau = moments - params.J_r * omega_r * Vec3{w[1], -w[0], 0.0};
  const Vec3 coriolis = w.cross(J.cwiseProduct(w));
  return (tau - coriolis).cwiseQuotient(J);
}

}  // namespace blfquad
