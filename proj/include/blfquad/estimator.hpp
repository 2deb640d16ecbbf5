#pragma once

#include <memory>

#include "blfquad/scenario.hpp"
#include "blfquad/types.hpp"

namespace blfquad {

/// Pluggable attitude-disturbance estimator. The simulation feeds it a
/// reconstructed disturbance measurement once per step.
class DisturbanceEstimator {
 public:
  virtual ~DisturbanceEstimator() = default;
  virtual Vec3 estimate() const = 0;
  virtual void update(const Vec3& h_measured, double dt) = 0;
};

/// No estimate; all compensation is left to the adaptive term.
class ZeroEstimator final : public DisturbanceEstimator {
 public:
  Vec3 estimate() const override { return Vec3::Zero(); }
  void update(const Vec3&, double) override {}
};

/// First-order tracker of the measured disturbance with time constant tau.
class FirstOrderTracker final : public DisturbanceEstimator {
 public:
  explicit FirstOrderTracker(double tau) : tau_(tau) {}
  Vec3 estimate() const override { return h_hat_; }
  void update(const Vec3& h_measured, double dt) override {
    h_hat_ += (dt / tau_) * (h_measured - h_hat_);
  }

 private:
  double tau_;
  Vec3 h_hat_ = Vec3::Zero();
};

std::unique_ptr<DisturbanceEstimator> make_estimator(EstimatorKind kind,
                                                     double tau);

}  // namespace blfquad
