#pragma once

#include "dynodisco/feature_library.hpp"
#include "dynodisco/masks.hpp"
#include "dynodisco/systems.hpp"

namespace dynodisco {

/// The true equation's support mapped onto `lib` (1 where the benchmark
/// system has a term). Throws if a required term is missing from the library.
BinaryMask true_support(SystemKind kind, const FeatureLibrary& lib);

/// Coefficient matrix Xi reproducing eval_true_rhs via (1 o Xi) Phi(x).
Eigen::MatrixXd true_coefficients(SystemKind kind, const SystemParams& params,
                                  const FeatureLibrary& lib);

}  // namespace dynodisco
