#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "dynodisco/feature_library.hpp"
#include "dynodisco/systems.hpp"

namespace dynodisco {

enum class LossKind { Huber, Squared };

/// Most recent grid index at a multiple of eta not exceeding i.
long eta_anchor(long i, long eta);

struct RolloutOptions {
  long eta = 1;       // <= 0 means full-horizon rollout (single anchor at index 0)
  int substeps = 1;   // RK4 steps per observation interval
  long limit = 0;     // use only the first `limit` observed points (0 = all)
  bool anchor_ceiling = false;
  LossKind loss = LossKind::Huber;
  double huber_delta = 1.0;
};

/// eta-block predictions: row 0 is the observed initial state; row j >= 1 is
/// the RK4 rollout of the model field from the observed anchor state at index
/// eta*floor((j-1)/eta) through index j. `effective` is the already-masked
/// coefficient matrix A = M o Xi (or sigma(M~) o Xi).
/// Throws IntegrationFailure carrying the failing index.
Eigen::MatrixXd predict_states(const Eigen::MatrixXd& effective, const FeatureLibrary& lib,
                               const Trajectory& traj, const RolloutOptions& opts);

/// Sum of per-entry losses between observations and eta-block predictions for
/// one trajectory. Returns +inf when the rollout leaves the finite range.
double rollout_loss(const Eigen::MatrixXd& effective, const FeatureLibrary& lib,
                    const Eigen::MatrixXd& states, double dt, const RolloutOptions& opts);

/// Same loss, plus the exact reverse-mode gradient with respect to the
/// effective coefficient matrix, accumulated into `grad` (not zeroed here).
/// The gradient is taken through the unrolled RK4 stages. Returns +inf and
/// leaves `grad` untouched when the rollout diverges.
double rollout_loss_grad(const Eigen::MatrixXd& effective, const FeatureLibrary& lib,
                         const Eigen::MatrixXd& states, double dt, const RolloutOptions& opts,
                         Eigen::MatrixXd& grad);

/// Squared-error tail of a single continuous rollout anchored at `anchor`,
/// targets anchor+1..m-1. Returns {sum of squares, entry count}; the sum is
/// +inf when the rollout diverges.
std::pair<double, long> rollout_sq_tail(const Eigen::MatrixXd& effective,
                                        const FeatureLibrary& lib,
                                        const Eigen::MatrixXd& states, double dt, long anchor,
                                        int substeps);

/// Number of leading points used for training: v = floor(fraction * m).
long validation_split(long m, double fraction);

/// Extrapolation validation criterion: MSE of the continuous rollout from the
/// observed state at index v-1 (0-based) over indices v..m-1, pooled over all
/// given trajectories. +inf when any rollout diverges.
double validation_loss(const Eigen::MatrixXd& effective, const FeatureLibrary& lib,
                       const std::vector<const Trajectory*>& trajs, double val_fraction,
                       int substeps);

}  // namespace dynodisco
