#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace dynodisco {

inline double sigmoid(double x) {
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double logit(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return std::log(p / (1.0 - p));
}

inline double sigmoid_derivative(double x) {
  const double s = sigmoid(x);
  return s * (1.0 - s);
}

/// Shared binary term-selection mask M in {0,1}^{n x p}.
struct BinaryMask {
  Eigen::MatrixXd values;

  long active_count() const { return static_cast<long>((values.array() != 0.0).count()); }
  static BinaryMask ones(Eigen::Index n, Eigen::Index p) {
    return BinaryMask{Eigen::MatrixXd::Ones(n, p)};
  }
  static BinaryMask zeros(Eigen::Index n, Eigen::Index p) {
    return BinaryMask{Eigen::MatrixXd::Zero(n, p)};
  }
};

/// Continuous relaxation of the mask; entries at -inf are pruned for good
/// (monotone pruning: -inf never becomes finite again).
struct RelaxedMask {
  Eigen::MatrixXd values;

  bool pruned(Eigen::Index i, Eigen::Index j) const {
    return values(i, j) == -std::numeric_limits<double>::infinity();
  }
  long active_count() const {
    long c = 0;
    for (Eigen::Index i = 0; i < values.rows(); ++i)
      for (Eigen::Index j = 0; j < values.cols(); ++j)
        if (!pruned(i, j)) ++c;
    return c;
  }
  Eigen::MatrixXd sigmoid_values() const {
    return values.unaryExpr([](double v) { return sigmoid(v); });
  }
};

/// Binarization: 0 exactly where sigma(M~) = 0 (i.e. the entry is -inf),
/// 1 everywhere else.
inline BinaryMask quantize_mask(const RelaxedMask& relaxed) {
  BinaryMask mask;
  mask.values = relaxed.values.unaryExpr([](double v) {
    return v == -std::numeric_limits<double>::infinity() ? 0.0 : 1.0;
  });
  return mask;
}

}  // namespace dynodisco
