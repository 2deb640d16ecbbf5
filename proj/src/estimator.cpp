#include "blfquad/estimator.hpp"

namespace blfquad {

std::unique_ptr<DisturbanceEstimator> make_estimator(EstimatorKind kind,
                                                     double tau) {
  switch (kind) {
    case EstimatorKind::kZero:
      return std::make_unique<ZeroEstimator>();
    case EstimatorKind::kTracker:
      return std::make_unique<FirstOrderTracker>(tau);
  }
  throw ConfigError("unknown estimator kind");
}

}  // namespace blfquad
