#pragma once

#include "blfquad/errors.hpp"
#include "blfquad/types.hpp"

namespace blfquad {

/// Physical parameters of the quadrotor. Defaults are the Pelican airframe.
///
/// The inertia is split into a known nominal part and an uncertain delta;
/// controllers only ever see the nominal part, the simulation may inject the
/// delta into the truth model.
struct VehicleParams {
  double m = 0.485;                        // mass, kg
  Vec3 J_nominal{3.4e-3, 3.4e-3, 4.7e-3};  // diagonal inertia Jxx,Jyy,Jzz, kg m^2
  Vec3 J_delta = Vec3::Zero();             // diagonal inertia perturbation, kg m^2
  double mu = 1e-3;                        // bound on ||J_delta||, kg m^2
  double d = 0.35;                         // arm length, m
  double C_T = 2.9842e-5;                  // thrust coefficient, N s^2/rad^2
  double C_Q = 3.2320;                     // reaction-moment coefficient, N m s^2/rad^2
  double J_r = 3.4e-5;                     // rotor inertia, kg m^2
  Vec3 K_drag{0.01, 0.01, 0.01};           // linear drag coefficients, N s/m
  double g = 9.81;                         // gravitational acceleration, m/s^2

  /// Throws ConfigError if any invariant is violated (positivity, inertia
  /// delta within mu, perturbed inertia positive definite).
  void validate() const;
};

/// Rigid-body state: inertial position/velocity, Euler angles (roll, pitch,
/// yaw) and Euler-angle rates. The rotational channel identifies Euler rates
/// with the body angular velocity (small-angle flight regime).
struct RigidState {
  Vec3 p = Vec3::Zero();          // x, y, z in the inertial frame, m
  Vec3 v = Vec3::Zero();          // inertial velocity, m/s
  Vec3 theta = Vec3::Zero();      // phi, theta, psi, rad
  Vec3 theta_dot = Vec3::Zero();  // Euler rates, rad/s
};

/// Net thrust, body moments and the rotor speeds that realize them.
struct ControlOutputs {
  double u_T = 0.0;             // net thrust, N (>= 0)
  Vec3 moments = Vec3::Zero();  // roll/pitch/yaw moments, N m
  Vec4 omega = Vec4::Zero();    // rotor speeds, rad/s (>= 0)
  double omega_r = 0.0;         // relative speed of counter-rotating pairs, rad/s
};

struct RotorAllocation {
  Vec4 omega;      // rotor speeds, rad/s
  double omega_r;  // w1 - w2 + w3 - w4
};

/// Nonlinear drift and input gain of the attitude channel, with nominal
/// inertia only. accel_k = F[k] + G[k] * u_k + h_k.
struct AttitudePlantTerms {
  Vec3 F;
  Vec3 G;
};

/// Inertial-to-body rotation for the z-y'-x'' Tait-Bryan sequence.
/// Throws ModelDomainError when |roll| or |pitch| >= pi/2.
Mat3 rotation_matrix(const Vec3& theta);

/// Maps body angular velocity to Euler-angle rates.
/// Throws SingularityError when |pitch| >= pi/2 - 1e-6.
Vec3 euler_rate_transform(const Vec3& theta, const Vec3& omega_body);

/// Thrust/moment quadruple produced by the given rotor speeds (plus
/// configuration, rotors 1/3 spinning against 2/4).
Vec4 mix_forward(const Vec4& omega, const VehicleParams& params);

/// Inverts mix_forward. Throws InfeasibleAllocationError if the demand lies
/// outside the actuator cone (some squared speed would be negative).
RotorAllocation allocate_rotors(const Vec4& u, const VehicleParams& params);

/// Inertial acceleration under net thrust u_T, gravity and linear drag.
/// Throws ModelDomainError when the state violates the attitude domain.
Vec3 translational_accel(const RigidState& state, double u_T,
                         const VehicleParams& params);

/// Drift F and input gain G of the attitude channel at the current rates,
/// using the nominal inertia. omega_r scales the gyroscopic rotor coupling.
AttitudePlantTerms attitude_plant_terms(const Vec3& theta_dot, double omega_r,
                                        const VehicleParams& params);

/// Euler-angle accelerations: F + G .* moments + h, with h the lumped
/// uncertainty slot (zero for a perfectly known vehicle).
Vec3 attitude_accel(const RigidState& state, const Vec3& moments,
                    double omega_r, const VehicleParams& params,
                    const Vec3& h_lumped);

/// Lumped angular-acceleration uncertainty produced by the inertia delta:
/// J0^-1 * (-w x (Jd w) - Jd wdot), with w identified with the Euler rates.
Vec3 lumped_uncertainty(const Vec3& theta_dot, const Vec3& theta_ddot,
                        const VehicleParams& params);

/// Attitude accelerations of the truth model carrying the full (perturbed)
/// inertia, including the gyroscopic rotor moment. Equivalent to
/// attitude_accel with h = lumped_uncertainty at the resulting acceleration.
Vec3 attitude_accel_perturbed(const RigidState& state, const Vec3& moments,
                              double omega_r, const VehicleParams& params);

}  // namespace blfquad
