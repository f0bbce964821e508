#include "dynodisco/feature_library.hpp"

#include <cmath>
#include <stdexcept>

namespace dynodisco {

namespace {

constexpr int kMaxDegree = 15;

void enumerate_monomials(int n, int degree, std::vector<FeatureTerm>& out) {
  // Graded lexicographic: ascending total degree, then lexicographically
  // descending exponent tuples (x1-major), e.g. 1, x, y, x^2, xy, y^2.
  std::vector<int> exps(n, 0);
  for (int d = 0; d <= degree; ++d) {
    auto rec = [&](auto&& self, int var, int remaining) -> void {
      if (var == n - 1) {
        exps[var] = remaining;
        out.push_back(FeatureTerm{exps, std::nullopt});
        return;
      }
      for (int e = remaining; e >= 0; --e) {
        exps[var] = e;
        self(self, var + 1, remaining - e);
      }
      exps[var] = 0;
    };
    rec(rec, 0, d);
  }
}

}  // namespace

FeatureLibrary build_library(int n, int degree, bool include_trig) {
  if (n != 2 && n != 3) throw std::invalid_argument("build_library: n must be 2 or 3");
  if (degree < 1 || degree > kMaxDegree) {
    throw std::invalid_argument("build_library: degree out of range");
  }
  if (include_trig && n != 2) {
    throw std::invalid_argument("build_library: trig terms require n = 2");
  }
  std::vector<FeatureTerm> terms;
  enumerate_monomials(n, degree, terms);
  if (include_trig) {
    for (TrigTerm t : {TrigTerm::SinX1, TrigTerm::SinX2, TrigTerm::SinX1PlusX2}) {
      terms.push_back(FeatureTerm{{}, t});
    }
  }
  return FeatureLibrary(n, degree, include_trig, std::move(terms));
}

int FeatureLibrary::find_monomial(const std::vector<int>& exponents) const {
  for (int i = 0; i < p(); ++i) {
    if (!terms_[i].is_trig() && terms_[i].exponents == exponents) return i;
  }
  return -1;
}

int FeatureLibrary::find_trig(TrigTerm t) const {
  for (int i = 0; i < p(); ++i) {
    if (terms_[i].is_trig() && *terms_[i].trig == t) return i;
  }
  return -1;
}

void FeatureLibrary::eval(const Eigen::VectorXd& x, Eigen::VectorXd& phi) const {
  if (x.size() != n_) throw std::invalid_argument("eval_features: state dimension mismatch");
  phi.resize(p());

  double pw[3][kMaxDegree + 1];
  for (int i = 0; i < n_; ++i) {
    pw[i][0] = 1.0;
    for (int k = 1; k <= degree_; ++k) pw[i][k] = pw[i][k - 1] * x[i];
  }

  for (int t = 0; t < p(); ++t) {
    const FeatureTerm& term = terms_[t];
    if (term.is_trig()) {
      switch (*term.trig) {
        case TrigTerm::SinX1:
          phi[t] = std::sin(x[0]);
          break;
        case TrigTerm::SinX2:
          phi[t] = std::sin(x[1]);
          break;
        case TrigTerm::SinX1PlusX2:
          phi[t] = std::sin(x[0] + x[1]);
          break;
      }
    } else {
      double v = 1.0;
      for (int i = 0; i < n_; ++i) v *= pw[i][term.exponents[i]];
      phi[t] = v;
    }
  }
}

Eigen::VectorXd FeatureLibrary::eval(const Eigen::VectorXd& x) const {
  Eigen::VectorXd phi;
  eval(x, phi);
  return phi;
}

void FeatureLibrary::eval_and_jacobian_vjp(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                                           Eigen::VectorXd& phi, Eigen::VectorXd& jtz) const {
  phi.resize(p());
  jtz.setZero(n_);

  double pw[3][kMaxDegree + 1];
  for (int i = 0; i < n_; ++i) {
    pw[i][0] = 1.0;
    for (int k = 1; k <= degree_; ++k) pw[i][k] = pw[i][k - 1] * x[i];
  }

  for (int t = 0; t < p(); ++t) {
    const FeatureTerm& term = terms_[t];
    const double zt = z[t];
    if (term.is_trig()) {
      switch (*term.trig) {
        case TrigTerm::SinX1:
          phi[t] = std::sin(x[0]);
          jtz[0] += zt * std::cos(x[0]);
          break;
        case TrigTerm::SinX2:
          phi[t] = std::sin(x[1]);
          jtz[1] += zt * std::cos(x[1]);
          break;
        case TrigTerm::SinX1PlusX2: {
          phi[t] = std::sin(x[0] + x[1]);
          const double c = std::cos(x[0] + x[1]);
          jtz[0] += zt * c;
          jtz[1] += zt * c;
          break;
        }
      }
    } else {
      double v = 1.0;
      for (int i = 0; i < n_; ++i) v *= pw[i][term.exponents[i]];
      phi[t] = v;
      if (zt != 0.0) {
        for (int j = 0; j < n_; ++j) {
          const int ej = term.exponents[j];
          if (ej == 0) continue;
          double partial = ej * pw[j][ej - 1];
          for (int i = 0; i < n_; ++i) {
            if (i != j) partial *= pw[i][term.exponents[i]];
          }
          jtz[j] += zt * partial;
        }
      }
    }
  }
}

Eigen::MatrixXd FeatureLibrary::jacobian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(p(), n_);
  Eigen::VectorXd phi, jtz;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(p());
  for (int t = 0; t < p(); ++t) {
    z[t] = 1.0;
    eval_and_jacobian_vjp(x, z, phi, jtz);
    jac.row(t) = jtz.transpose();
    z[t] = 0.0;
  }
  return jac;
}

std::string term_name(const FeatureTerm& term, const std::vector<std::string>& var_names) {
  if (term.is_trig()) {
    switch (*term.trig) {
      case TrigTerm::SinX1:
        return "sin(" + var_names.at(0) + ")";
      case TrigTerm::SinX2:
        return "sin(" + var_names.at(1) + ")";
      case TrigTerm::SinX1PlusX2:
        return "sin(" + var_names.at(0) + "+" + var_names.at(1) + ")";
    }
  }
  if (term.exponents.size() != var_names.size()) {
    throw std::invalid_argument("term_name: variable name count mismatch");
  }
  std::string out;
  for (size_t i = 0; i < term.exponents.size(); ++i) {
    const int e = term.exponents[i];
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += var_names[i];
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

namespace {

void check_shape(const Eigen::MatrixXd& mask, const Eigen::MatrixXd& coeffs,
                 const FeatureLibrary& lib) {
  if (mask.rows() != coeffs.rows() || mask.cols() != coeffs.cols() ||
      coeffs.rows() != lib.n() || coeffs.cols() != lib.p()) {
    throw std::invalid_argument("model_rhs: mask/coefficients shape mismatch with library");
  }
}

}  // namespace

Eigen::MatrixXd effective_coefficients(const BinaryMask& mask, const Eigen::MatrixXd& coeffs) {
  return mask.values.cwiseProduct(coeffs);
}

Eigen::MatrixXd effective_coefficients(const RelaxedMask& mask, const Eigen::MatrixXd& coeffs) {
  return mask.sigmoid_values().cwiseProduct(coeffs);
}

RhsFunction model_rhs_from_effective(Eigen::MatrixXd effective, const FeatureLibrary& lib) {
  return [A = std::move(effective), lib, phi = Eigen::VectorXd()](
             const Eigen::VectorXd& x, Eigen::VectorXd& dxdt, double /*t*/) mutable {
    lib.eval(x, phi);
    dxdt.noalias() = A * phi;
  };
}

RhsFunction model_rhs(const BinaryMask& mask, const Eigen::MatrixXd& coeffs,
                      const FeatureLibrary& lib) {
  check_shape(mask.values, coeffs, lib);
  return model_rhs_from_effective(effective_coefficients(mask, coeffs), lib);
}

RhsFunction model_rhs(const RelaxedMask& mask, const Eigen::MatrixXd& coeffs,
                      const FeatureLibrary& lib) {
  check_shape(mask.values, coeffs, lib);
  return model_rhs_from_effective(effective_coefficients(mask, coeffs), lib);
}

}  // namespace dynodisco
