#pragma once

#include <string>
#include <vector>

#include "blfquad/scenario.hpp"

namespace blfquad::verification {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Options {
  bool fast = false;       // shorter horizons and fewer random samples
  unsigned long seed = 1;  // sampling seed for random instants/states
};

/// The ten acceptance criteria, evaluated at their pinned tolerances.
std::vector<CheckResult> acceptance_criteria(const Options& opt);

/// Module-level invariants beyond the acceptance set.
std::vector<CheckResult> property_suite(const Options& opt);

/// Variant of a built-in scenario used for the theory-exact checks: matched
/// uncertainty, no actuation limits, exact inertia, zero estimator.
Scenario matched_variant(Scenario s);

/// Matched-model scenario with analytic roll/pitch references; the exact
/// setting of the attitude Lyapunov results.
Scenario analytic_attitude_scenario();

// Pinned tolerances/thresholds.
inline constexpr double kTrackingTailTol = 1e-2;      // m / rad for t > 20 s
inline constexpr double kTrackingTerminalTol = 1e-3;  // m / rad at the end
inline constexpr double kIdentityAbsTol = 1e-6;
inline constexpr double kIdentityRelTol = 1e-3;
inline constexpr double kRoundTripTol = 1e-9;
inline constexpr double kOrthoTol = 1e-12;
inline constexpr double kOrderRatioMin = 15.0;
inline constexpr double kSatTransientEnd = 2.0;       // s
inline constexpr double kRunTimeBudget = 5.0;         // s per scenario

}  // namespace blfquad::verification
