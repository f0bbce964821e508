#include "dynodisco/ground_truth.hpp"

#include <stdexcept>

namespace dynodisco {

namespace {

struct TermEntry {
  int row;
  std::vector<int> exponents;  // empty => trig
  TrigTerm trig = TrigTerm::SinX1;
  bool is_trig = false;
  double value = 0.0;
};

std::vector<TermEntry> true_terms(SystemKind kind, const SystemParams& params) {
  switch (kind) {
    case SystemKind::Linear3D: {
      const double a = params[0], b = params[1], g = params[2], d = params[3], w = params[4];
      return {{0, {1, 0, 0}, {}, false, a}, {0, {0, 1, 0}, {}, false, b},
              {1, {1, 0, 0}, {}, false, g}, {1, {0, 1, 0}, {}, false, d},
              {2, {0, 0, 1}, {}, false, w}};
    }
    case SystemKind::Lorenz: {
      const double s = params[0], r = params[1], b = params[2];
      return {{0, {1, 0, 0}, {}, false, -s}, {0, {0, 1, 0}, {}, false, s},
              {1, {1, 0, 0}, {}, false, r},  {1, {0, 1, 0}, {}, false, -1.0},
              {1, {1, 0, 1}, {}, false, -1.0}, {2, {1, 1, 0}, {}, false, 1.0},
              {2, {0, 0, 1}, {}, false, -b}};
    }
    case SystemKind::LotkaVolterra: {
      const double a = params[0], b = params[1], g = params[2], d = params[3];
      return {{0, {1, 0}, {}, false, a}, {0, {1, 1}, {}, false, -b},
              {1, {1, 1}, {}, false, d}, {1, {0, 1}, {}, false, -g}};
    }
    case SystemKind::DampedPendulum: {
      const double a = params[0], w0 = params[1];
      return {{0, {0, 1}, {}, false, 1.0},
              {1, {0, 1}, {}, false, -a},
              {1, {}, TrigTerm::SinX1, true, -w0 * w0}};
    }
  }
  throw std::invalid_argument("true_terms: unknown kind");
}

int locate(const FeatureLibrary& lib, const TermEntry& entry) {
  const int idx = entry.is_trig ? lib.find_trig(entry.trig) : lib.find_monomial(entry.exponents);
  if (idx < 0) {
    throw std::invalid_argument("ground truth term is not in the feature library");
  }
  return idx;
}

}  // namespace

BinaryMask true_support(SystemKind kind, const FeatureLibrary& lib) {
  if (lib.n() != state_dim(kind)) {
    throw std::invalid_argument("true_support: library dimension mismatch");
  }
  BinaryMask mask = BinaryMask::zeros(lib.n(), lib.p());
  SystemParams nominal;
  nominal.kind = kind;
  nominal.values = Eigen::VectorXd::Ones(param_count(kind));  // support is parameter-independent
  for (const TermEntry& entry : true_terms(kind, nominal)) {
    mask.values(entry.row, locate(lib, entry)) = 1.0;
  }
  return mask;
}

Eigen::MatrixXd true_coefficients(SystemKind kind, const SystemParams& params,
                                  const FeatureLibrary& lib) {
  if (lib.n() != state_dim(kind)) {
    throw std::invalid_argument("true_coefficients: library dimension mismatch");
  }
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(lib.n(), lib.p());
  for (const TermEntry& entry : true_terms(kind, params)) {
    coeffs(entry.row, locate(lib, entry)) += entry.value;
  }
  return coeffs;
}

}  // namespace dynodisco
