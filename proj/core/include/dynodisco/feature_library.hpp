#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "dynodisco/integrators.hpp"
#include "dynodisco/masks.hpp"

namespace dynodisco {

enum class TrigTerm { SinX1, SinX2, SinX1PlusX2 };

/// One candidate feature: either a monomial given by its exponent vector
/// (the all-zero vector is the constant 1) or one of the fixed trig terms.
struct FeatureTerm {
  std::vector<int> exponents;     // length n for monomials, empty for trig
  std::optional<TrigTerm> trig;

  bool is_trig() const { return trig.has_value(); }
  int total_degree() const {
    int d = 0;
    for (int e : exponents) d += e;
    return d;
  }
  bool operator==(const FeatureTerm& other) const = default;
};

/// Ordered candidate set Phi = [phi_1, ..., phi_p]. Monomials come first in
/// graded lexicographic order (constant, then degree 1, ...), trig terms
/// last in the fixed order sin(x1), sin(x2), sin(x1+x2).
class FeatureLibrary {
 public:
  FeatureLibrary() = default;
  FeatureLibrary(int n, int degree, bool include_trig, std::vector<FeatureTerm> terms)
      : n_(n), degree_(degree), include_trig_(include_trig), terms_(std::move(terms)) {}

  int n() const { return n_; }
  int degree() const { return degree_; }
  bool include_trig() const { return include_trig_; }
  int p() const { return static_cast<int>(terms_.size()); }
  const std::vector<FeatureTerm>& terms() const { return terms_; }
  const FeatureTerm& term(int i) const { return terms_[i]; }

  /// Index of a term, or -1 when absent.
  int find_monomial(const std::vector<int>& exponents) const;
  int find_trig(TrigTerm t) const;

  void eval(const Eigen::VectorXd& x, Eigen::VectorXd& phi) const;
  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;

  /// phi = Phi(x) and jtz = J_Phi(x)^T z in one pass (shared power table);
  /// used by the reverse-mode rollout engine.
  void eval_and_jacobian_vjp(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                             Eigen::VectorXd& phi, Eigen::VectorXd& jtz) const;

  /// Full p x n Jacobian (row t is the gradient of phi_t).
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

  bool operator==(const FeatureLibrary& other) const {
    return n_ == other.n_ && terms_ == other.terms_;
  }

 private:
  int n_ = 0;
  int degree_ = 0;
  bool include_trig_ = false;
  std::vector<FeatureTerm> terms_;
};

/// All monomials of total degree <= degree in graded-lex order, optionally
/// followed by the three trig terms (n = 2 only).
FeatureLibrary build_library(int n, int degree, bool include_trig);

std::string term_name(const FeatureTerm& term, const std::vector<std::string>& var_names);

/// Effective coefficient matrix A with the mask applied elementwise.
Eigen::MatrixXd effective_coefficients(const BinaryMask& mask, const Eigen::MatrixXd& coeffs);
Eigen::MatrixXd effective_coefficients(const RelaxedMask& mask, const Eigen::MatrixXd& coeffs);

/// x -> (M o Xi) Phi(x) as a generic RhsFunction.
RhsFunction model_rhs(const BinaryMask& mask, const Eigen::MatrixXd& coeffs,
                      const FeatureLibrary& lib);
RhsFunction model_rhs(const RelaxedMask& mask, const Eigen::MatrixXd& coeffs,
                      const FeatureLibrary& lib);
RhsFunction model_rhs_from_effective(Eigen::MatrixXd effective, const FeatureLibrary& lib);

}  // namespace dynodisco
