#pragma once

#include <array>
#include <string>

#include "blfquad/scenario.hpp"
#include "blfquad/telemetry.hpp"
#include "blfquad/types.hpp"

namespace blfquad {

/// Aggregate outcome of one closed-loop run. A run that breaches a barrier
/// bound or the attitude model domain aborts by throwing instead of
/// returning, so bound_violations is zero on every returned report; the
/// field mirrors the per-step counter for report serialization.
struct VerificationReport {
  bool completed = false;
  long steps = 0;
  double dt = 0.0;
  double duration = 0.0;

  Vec3 max_abs_pos_err = Vec3::Zero();
  Vec3 max_abs_att_err = Vec3::Zero();
  Vec3 tail_max_abs_pos_err = Vec3::Zero();  // over t > tail_start
  Vec3 tail_max_abs_att_err = Vec3::Zero();
  double tail_start = 20.0;
  Vec3 terminal_pos_err = Vec3::Zero();
  Vec3 terminal_att_err = Vec3::Zero();

  long bound_violations = 0;

  // Per-step Lyapunov increases beyond tolerance while no clamp was active.
  std::array<long, 3> pos_energy_increases{};
  std::array<long, 3> att_energy_increases{};

  double saturation_duty = 0.0;  // fraction of steps with any clamp active
  double last_saturated_time = -1.0;

  Vec3 E0 = Vec3::Zero();  // initial position Lyapunov values
  Vec3 D0 = Vec3::Zero();  // initial attitude Lyapunov values
  std::array<ConfinementInterval, 3> pos_confinement{};
  std::array<ConfinementInterval, 3> att_confinement{};
  long confinement_violations = 0;
  long att_envelope_violations = 0;  // outer-loop tilt reference outside its envelope

  Vec3 max_abs_adaptive_gain = Vec3::Zero();
};

struct SimResult {
  TelemetryLog log;
  VerificationReport report;
};

struct SaturatedOutputs {
  double u_T = 0.0;
  Vec3 moments = Vec3::Zero();
  std::uint8_t flags = 0;
};

/// Clamps the thrust to [0, thrust_max] and each moment to +-moment_max,
/// flagging every active clamp. With limits disabled the demand passes
/// through unchanged.
SaturatedOutputs saturate(double u_T_demand, const Vec3& moment_demand,
                          const SaturationSpec& limits);

/// Integrates the closed loop over the scenario duration. decimation picks
/// every Nth step into the telemetry log (the stepping itself always runs at
/// scenario dt). Throws BoundViolationError / ModelDomainError /
/// InfeasibleAllocationError with a time-stamped diagnostic on abort.
SimResult run_scenario(const Scenario& scenario, int decimation = 1);

/// Per-step Lyapunov increase tolerance used for the monotonicity counters.
inline constexpr double kEnergyIncreaseTolerance = 1e-9;

std::string report_to_json(const VerificationReport& report);

}  // namespace blfquad
