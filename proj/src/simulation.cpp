#include "blfquad/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "blfquad/estimator.hpp"
#include "blfquad/integrator.hpp"
#include "blfquad/position_control.hpp"
#include "blfquad/attitude_control.hpp"
#include "blfquad/vehicle.hpp"

namespace blfquad {

namespace {

constexpr double kTiltAccelClip = 100.0;  // rad/s^2

// Flat state layout for the integrator.
constexpr int kP = 0;      // position
constexpr int kV = 3;      // velocity
constexpr int kTh = 6;     // Euler angles
constexpr int kThd = 9;    // Euler rates
constexpr int kHbar = 12;  // adaptive gains
constexpr int kNStates = 15;

struct ControlStep {
  Vec3 pos_err, pos_err_rate, accel_cmd;
  Vec3 zeta = Vec3::Zero();
  Vec3 lambda = Vec3::Zero();
  Vec3 theta_d, theta_d_dot, theta_d_ddot;
  Vec3 att_err, att_err_rate;
  double thrust_demand = 0.0;
  double u_T = 0.0;
  Vec3 moments = Vec3::Zero();
  Vec4 omega = Vec4::Zero();
  double omega_r_next = 0.0;
  Vec3 F = Vec3::Zero();
  Vec3 E = Vec3::Zero();
  Vec3 D = Vec3::Zero();
  std::uint8_t sat_flags = 0;
};

class Simulator {
 public:
  Simulator(const Scenario& sc, int decimation)
      : sc_(sc), decimation_(decimation) {
    if (decimation_ < 1) throw ConfigError("decimation must be >= 1");
    sc_.validate();
    estimator_ = make_estimator(sc_.estimator, sc_.estimator_tau);
    matched_ = sc_.uncertainty.model == UncertaintyModel::kMatched;
    h0_ = matched_ ? sc_.uncertainty.h0 : Vec3::Zero();
    n_steps_ = static_cast<long>(std::llround(sc_.duration / sc_.dt));
    if (n_steps_ < 1) throw ConfigError("duration shorter than one step");
  }

  SimResult run() {
    init_state();
    SimResult out;
    out.report.dt = sc_.dt;
    out.report.duration = sc_.duration;
    out.report.steps = n_steps_;
    out.log.reserve(static_cast<size_t>(n_steps_ / decimation_) + 2);

    Vec3 prev_E = Vec3::Zero(), prev_D = Vec3::Zero();
    std::uint8_t prev_flags = 0;
    long sat_steps = 0;

    for (long n = 0; n <= n_steps_; ++n) {
      const double t = static_cast<double>(n) * sc_.dt;
      const TrajectorySample sample = sc_.traj(sc_.start + t);
      const ControlStep cs = control_step(t, sample);

      if (n == 0) setup_confinement(out.report, cs);
      update_stats(out.report, cs, t, n, prev_E, prev_D, prev_flags);
      if (cs.sat_flags != 0) {
        ++sat_steps;
        out.report.last_saturated_time = t;
      }
      if (n % decimation_ == 0 || n == n_steps_)
        out.log.push_back(make_row(t, sample, cs));

      prev_E = cs.E;
      prev_D = cs.D;
      prev_flags = cs.sat_flags;
      if (n == n_steps_) break;

      advance(t, cs);
      omega_r_lag_ = cs.omega_r_next;
      push_tilt_history(cs.theta_d);
    }

    out.report.completed = true;
    out.report.saturation_duty =
        static_cast<double>(sat_steps) / static_cast<double>(n_steps_ + 1);
    return out;
  }

 private:
  void init_state() {
    x_ = VecX::Zero(kNStates);
    const TrajectorySample s0 = sc_.traj(sc_.start);
    x_.segment<3>(kP) = s0.p_d + sc_.initial_pos_err;
    // Zero initial error rates: the vehicle starts at the reference velocity
    // (the built-in paths start from rest, where this is the zero vector).
    x_.segment<3>(kV) = s0.p_d_dot;
    x_.segment<3>(kThd).setZero();
    x_.segment<3>(kHbar).setZero();

    // The roll/pitch references only exist once the outer loop has run, so
    // evaluate it once at the initial position state and offset from there.
    Vec3 theta_ref{0.0, 0.0, s0.theta_d[ATT_YAW]};
    if (sc_.roll_pitch_from_outer) {
      Vec3 accel_cmd;
      for (int i = 0; i < 3; ++i) {
        const double gamma = sc_.initial_pos_err[i];
        const double gamma_dot = 0.0;
        accel_cmd[i] = virtual_control(gamma, gamma_dot, s0.p_d_dot[i], s0.p_d_ddot[i],
                                       sc_.constraints.pos[i], sc_.pos_gains[i],
                                       sc_.vehicle.K_drag[i], sc_.vehicle.m);
      }
      const double uT = extract_thrust(accel_cmd, sc_.vehicle);
      const auto [phi_d, theta_d] =
          desired_attitude(accel_cmd, s0.theta_d[ATT_YAW], uT, sc_.vehicle);
      theta_ref[ATT_ROLL] = phi_d;
      theta_ref[ATT_PITCH] = theta_d;
    } else {
      theta_ref = s0.theta_d;
    }
    x_.segment<3>(kTh) = theta_ref + sc_.initial_att_err;
    omega_r_lag_ = 0.0;
    tilt_hist_count_ = 0;
  }

  RigidState rigid_state() const {
    RigidState st;
    st.p = x_.segment<3>(kP);
    st.v = x_.segment<3>(kV);
    st.theta = x_.segment<3>(kTh);
    st.theta_dot = x_.segment<3>(kThd);
    return st;
  }

  ControlStep control_step(double t, const TrajectorySample& sample) {
    ControlStep cs;
    const RigidState st = rigid_state();

    // Outer loop.
    for (int i = 0; i < 3; ++i) {
      cs.pos_err[i] = st.p[i] - sample.p_d[i];
      cs.pos_err_rate[i] = st.v[i] - sample.p_d_dot[i];
      if (!sc_.constraints.pos[i].contains(cs.pos_err[i])) {
        std::ostringstream os;
        os << "position error bound breached on axis " << i << " at t=" << t
           << ": gamma=" << cs.pos_err[i] << " corridor (-"
           << sc_.constraints.pos[i].lower << ", "
           << sc_.constraints.pos[i].upper << ")";
        throw BoundViolationError(os.str());
      }
      cs.accel_cmd[i] = virtual_control(
          cs.pos_err[i], cs.pos_err_rate[i], st.v[i], sample.p_d_ddot[i],
          sc_.constraints.pos[i], sc_.pos_gains[i], sc_.vehicle.K_drag[i],
          sc_.vehicle.m);
      cs.zeta[i] =
          barrier::rate_residual(cs.pos_err[i], cs.pos_err_rate[i],
                                 sc_.constraints.pos[i],
                                 sc_.pos_gains[i].barrier_gain);
      cs.E[i] = barrier::value(cs.pos_err[i], sc_.constraints.pos[i]) +
                0.5 * cs.zeta[i] * cs.zeta[i];
    }

    // Thrust magnitude and tilt references.
    cs.thrust_demand = extract_thrust(cs.accel_cmd, sc_.vehicle);
    cs.theta_d = sample.theta_d;
    cs.theta_d_dot = sample.theta_d_dot;
    cs.theta_d_ddot = sample.theta_d_ddot;
    if (sc_.roll_pitch_from_outer) {
      const auto [phi_d, theta_d] = desired_attitude(
          cs.accel_cmd, sample.theta_d[ATT_YAW], cs.thrust_demand, sc_.vehicle);
      cs.theta_d[ATT_ROLL] = phi_d;
      cs.theta_d[ATT_PITCH] = theta_d;
      estimate_tilt_derivatives(cs);
    }

    // Inner loop.
    const AttitudePlantTerms plant =
        attitude_plant_terms(st.theta_dot, omega_r_lag_, sc_.vehicle);
    cs.F = plant.F;
    const Vec3 h_hat = estimator_->estimate();
    const Vec3 h_bar = x_.segment<3>(kHbar);
    for (int k = 0; k < 3; ++k) {
      cs.att_err[k] = st.theta[k] - cs.theta_d[k];
      cs.att_err_rate[k] = st.theta_dot[k] - cs.theta_d_dot[k];
      if (!sc_.constraints.att[k].contains(cs.att_err[k])) {
        std::ostringstream os;
        os << "attitude error bound breached on axis " << k << " at t=" << t
           << ": upsilon=" << cs.att_err[k] << " corridor (-"
           << sc_.constraints.att[k].lower << ", "
           << sc_.constraints.att[k].upper << ")";
        throw BoundViolationError(os.str());
      }
      cs.moments[k] = attitude_moment(
          cs.att_err[k], cs.att_err_rate[k], st.theta_dot[k],
          cs.theta_d_ddot[k], plant.F[k], plant.G[k], h_hat[k], h_bar[k],
          sc_.constraints.att[k], sc_.att_gains[k]);
      const double h_err = h0_[k] - h_bar[k];
      cs.lambda[k] =
          barrier::rate_residual(cs.att_err[k], cs.att_err_rate[k],
                                 sc_.constraints.att[k],
                                 sc_.att_gains[k].barrier_gain);
      cs.D[k] = attitude_blf(cs.att_err[k], sc_.constraints.att[k], h_err) +
                0.5 * cs.lambda[k] * cs.lambda[k];
    }

    // Actuator limits, then rotor allocation.
    const SaturatedOutputs sat =
        saturate(cs.thrust_demand, cs.moments, sc_.saturation);
    cs.u_T = sat.u_T;
    cs.moments = sat.moments;
    cs.sat_flags = sat.flags;
    try {
      const RotorAllocation alloc = allocate_rotors(
          Vec4{cs.u_T, cs.moments[0], cs.moments[1], cs.moments[2]},
          sc_.vehicle);
      cs.omega = alloc.omega;
      cs.omega_r_next = alloc.omega_r;
    } catch (const InfeasibleAllocationError& e) {
      std::ostringstream os;
      os << e.what() << " at t=" << t;
      throw InfeasibleAllocationError(os.str());
    }
    return cs;
  }

  // Backward differences over the outer-loop tilt stream, initialized at
  // zero. Rates use the second-order three-sample stencil (the first-order
  // one leaves a dt/2-scale rate bias that the adaptation integrates into a
  // permanent moment offset). The barrier-gradient branch switch at a zero
  // error crossing kinks the tilt-reference rate; a raw second difference
  // turns that kink into a one-step spike of order 1/dt, so the
  // acceleration estimate is clipped and the loop catches the kink over a
  // few steps.
  void estimate_tilt_derivatives(ControlStep& cs) {
    const double dt = sc_.dt;
    for (int k = 0; k < 2; ++k) {
      if (tilt_hist_count_ >= 3) {
        cs.theta_d_dot[k] = (3.0 * cs.theta_d[k] - 4.0 * tilt_hist_[0][k] +
                             tilt_hist_[1][k]) /
                            (2.0 * dt);
        const double raw =
            (2.0 * cs.theta_d[k] - 5.0 * tilt_hist_[0][k] +
             4.0 * tilt_hist_[1][k] - tilt_hist_[2][k]) /
            (dt * dt);
        cs.theta_d_ddot[k] = std::clamp(raw, -kTiltAccelClip, kTiltAccelClip);
      } else if (tilt_hist_count_ >= 2) {
        cs.theta_d_dot[k] = (cs.theta_d[k] - tilt_hist_[0][k]) / dt;
        const double raw =
            (cs.theta_d[k] - 2.0 * tilt_hist_[0][k] + tilt_hist_[1][k]) /
            (dt * dt);
        cs.theta_d_ddot[k] = std::clamp(raw, -kTiltAccelClip, kTiltAccelClip);
      } else if (tilt_hist_count_ >= 1) {
        cs.theta_d_dot[k] = (cs.theta_d[k] - tilt_hist_[0][k]) / dt;
      }
    }
  }

  void push_tilt_history(const Vec3& theta_d) {
    tilt_hist_[2] = tilt_hist_[1];
    tilt_hist_[1] = tilt_hist_[0];
    tilt_hist_[0] = theta_d;
    if (tilt_hist_count_ < 3) ++tilt_hist_count_;
  }

  // Plant + adaptation derivative with the step-held controls.
  void advance(double t, const ControlStep& cs) {
    const Vec3 prev_theta_dot = x_.segment<3>(kThd);

    auto deriv = [&](double, const VecX& x) -> VecX {
      RigidState st;
      st.p = x.segment<3>(kP);
      st.v = x.segment<3>(kV);
      st.theta = x.segment<3>(kTh);
      st.theta_dot = x.segment<3>(kThd);

      VecX dx = VecX::Zero(kNStates);
      dx.segment<3>(kP) = st.v;
      dx.segment<3>(kTh) = st.theta_dot;

      if (matched_) {
        // Commanded acceleration applied directly; drag evolves with the
        // continuous velocity so the design cancellation stays exact at the
        // step boundary.
        dx.segment<3>(kV) =
            cs.accel_cmd -
            sc_.vehicle.K_drag.cwiseProduct(st.v) / sc_.vehicle.m;
        Vec3 h_inject;
        for (int k = 0; k < 3; ++k)
          h_inject[k] = h0_[k] * regressor(st.theta_dot[k]);
        dx.segment<3>(kThd) =
            attitude_accel(st, cs.moments, omega_r_lag_, sc_.vehicle, h_inject);
      } else {
        dx.segment<3>(kV) = translational_accel(st, cs.u_T, sc_.vehicle);
        dx.segment<3>(kThd) =
            attitude_accel_perturbed(st, cs.moments, omega_r_lag_, sc_.vehicle);
      }

      // Adaptation rides along with references held over the step.
      for (int k = 0; k < 3; ++k) {
        const double ups = st.theta[k] - cs.theta_d[k];
        const double ups_dot = st.theta_dot[k] - cs.theta_d_dot[k];
        const double lambda = barrier::rate_residual_poly(
            ups, ups_dot, sc_.constraints.att[k],
            sc_.att_gains[k].barrier_gain);
        dx[kHbar + k] = lambda * regressor(st.theta_dot[k]);
      }
      return dx;
    };

    x_ = rk4_step(x_, t, sc_.dt, deriv);

    // Disturbance measurement for the tracker: acceleration residual against
    // the nominal model over the step just taken.
    const Vec3 theta_ddot_meas =
        (x_.segment<3>(kThd) - prev_theta_dot) / sc_.dt;
    const AttitudePlantTerms plant =
        attitude_plant_terms(prev_theta_dot, omega_r_lag_, sc_.vehicle);
    const Vec3 h_meas =
        theta_ddot_meas - plant.F - plant.G.cwiseProduct(cs.moments);
    estimator_->update(h_meas, sc_.dt);
  }

  void setup_confinement(VerificationReport& rep, const ControlStep& cs) {
    rep.E0 = cs.E;
    rep.D0 = cs.D;
    for (int i = 0; i < 3; ++i) {
      rep.pos_confinement[i] = position_confinement(
          sc_.constraints.pos[i], rep.E0[i], sc_.constraints.pos_env_lower(i),
          sc_.constraints.pos_env_upper(i));
      rep.att_confinement[i] = attitude_confinement(
          sc_.constraints.att[i], rep.D0[i], sc_.constraints.att_env_lower(i),
          sc_.constraints.att_env_upper(i));
    }
  }

  void update_stats(VerificationReport& rep, const ControlStep& cs, double t,
                    long n, const Vec3& prev_E, const Vec3& prev_D,
                    std::uint8_t prev_flags) {
    const RigidState st = rigid_state();
    for (int i = 0; i < 3; ++i) {
      rep.max_abs_pos_err[i] =
          std::max(rep.max_abs_pos_err[i], std::abs(cs.pos_err[i]));
      rep.max_abs_att_err[i] =
          std::max(rep.max_abs_att_err[i], std::abs(cs.att_err[i]));
      if (t > rep.tail_start) {
        rep.tail_max_abs_pos_err[i] =
            std::max(rep.tail_max_abs_pos_err[i], std::abs(cs.pos_err[i]));
        rep.tail_max_abs_att_err[i] =
            std::max(rep.tail_max_abs_att_err[i], std::abs(cs.att_err[i]));
      }
      rep.max_abs_adaptive_gain[i] =
          std::max(rep.max_abs_adaptive_gain[i], std::abs(x_[kHbar + i]));
      if (n > 0 && prev_flags == 0) {
        if (cs.E[i] > prev_E[i] + kEnergyIncreaseTolerance)
          ++rep.pos_energy_increases[i];
        if (cs.D[i] > prev_D[i] + kEnergyIncreaseTolerance)
          ++rep.att_energy_increases[i];
      }
      if (!rep.pos_confinement[i].contains(st.p[i])) ++rep.confinement_violations;
      if (!rep.att_confinement[i].contains(st.theta[i]))
        ++rep.confinement_violations;
    }
    if (sc_.roll_pitch_from_outer) {
      for (int k = 0; k < 2; ++k) {
        if (cs.theta_d[k] < -sc_.constraints.att_env_lower(k) ||
            cs.theta_d[k] > sc_.constraints.att_env_upper(k))
          ++rep.att_envelope_violations;
      }
    }
    rep.terminal_pos_err = cs.pos_err;
    rep.terminal_att_err = cs.att_err;
  }

  TelemetryRow make_row(double t, const TrajectorySample& sample,
                        const ControlStep& cs) const {
    TelemetryRow r;
    r.t = t;
    const RigidState st = rigid_state();
    r.p = st.p;
    r.v = st.v;
    r.theta = st.theta;
    r.theta_dot = st.theta_dot;
    r.p_d = sample.p_d;
    r.theta_d = cs.theta_d;
    r.pos_err = cs.pos_err;
    r.att_err = cs.att_err;
    r.accel_cmd = cs.accel_cmd;
    r.thrust_demand = cs.thrust_demand;
    r.u_T = cs.u_T;
    r.moments = cs.moments;
    r.omega = cs.omega;
    r.E = cs.E;
    r.D = cs.D;
    r.h_bar = x_.segment<3>(kHbar);
    r.zeta = cs.zeta;
    r.lambda = cs.lambda;
    r.sat_flags = cs.sat_flags;
    return r;
  }

  Scenario sc_;
  int decimation_;
  bool matched_ = false;
  Vec3 h0_ = Vec3::Zero();
  long n_steps_ = 0;
  VecX x_;
  double omega_r_lag_ = 0.0;
  Vec3 tilt_hist_[3] = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  int tilt_hist_count_ = 0;
  std::unique_ptr<DisturbanceEstimator> estimator_;
};

}  // namespace

SimResult run_scenario(const Scenario& scenario, int decimation) {
  Simulator sim(scenario, decimation);
  return sim.run();
}

SaturatedOutputs saturate(double u_T_demand, const Vec3& moment_demand,
                          const SaturationSpec& limits) {
  SaturatedOutputs out;
  out.u_T = u_T_demand;
  out.moments = moment_demand;
  if (!limits.enabled) return out;
  if (out.u_T > limits.thrust_max) {
    out.u_T = limits.thrust_max;
    out.flags |= SAT_THRUST;
  } else if (out.u_T < 0.0) {
    out.u_T = 0.0;
    out.flags |= SAT_THRUST;
  }
  for (int k = 0; k < 3; ++k) {
    if (out.moments[k] > limits.moment_max) {
      out.moments[k] = limits.moment_max;
      out.flags |= static_cast<std::uint8_t>(SAT_ROLL << k);
    } else if (out.moments[k] < -limits.moment_max) {
      out.moments[k] = -limits.moment_max;
      out.flags |= static_cast<std::uint8_t>(SAT_ROLL << k);
    }
  }
  return out;
}

std::string report_to_json(const VerificationReport& rep) {
  nlohmann::json j;
  j["completed"] = rep.completed;
  j["steps"] = rep.steps;
  j["dt"] = rep.dt;
  j["duration"] = rep.duration;
  auto vec = [](const Vec3& v) { return std::array<double, 3>{v[0], v[1], v[2]}; };
  j["max_abs_pos_err"] = vec(rep.max_abs_pos_err);
  j["max_abs_att_err"] = vec(rep.max_abs_att_err);
  j["tail_start"] = rep.tail_start;
  j["tail_max_abs_pos_err"] = vec(rep.tail_max_abs_pos_err);
  j["tail_max_abs_att_err"] = vec(rep.tail_max_abs_att_err);
  j["terminal_pos_err"] = vec(rep.terminal_pos_err);
  j["terminal_att_err"] = vec(rep.terminal_att_err);
  j["bound_violations"] = rep.bound_violations;
  j["pos_energy_increases"] = rep.pos_energy_increases;
  j["att_energy_increases"] = rep.att_energy_increases;
  j["saturation_duty"] = rep.saturation_duty;
  j["last_saturated_time"] = rep.last_saturated_time;
  j["E0"] = vec(rep.E0);
  j["D0"] = vec(rep.D0);
  auto conf = [](const ConfinementInterval& c) {
    return nlohmann::json{{"H_lower", c.H_lower},
                          {"H_upper", c.H_upper},
                          {"lo", c.lo},
                          {"hi", c.hi}};
  };
  for (int i = 0; i < 3; ++i) {
    j["pos_confinement"].push_back(conf(rep.pos_confinement[i]));
    j["att_confinement"].push_back(conf(rep.att_confinement[i]));
  }
  j["confinement_violations"] = rep.confinement_violations;
  j["att_envelope_violations"] = rep.att_envelope_violations;
  j["max_abs_adaptive_gain"] = vec(rep.max_abs_adaptive_gain);
  return j.dump(2);
}

}  // namespace blfquad
