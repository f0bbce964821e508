#include "dynodisco/prediction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dynodisco/errors.hpp"
#include "dynodisco/integrators.hpp"

namespace dynodisco {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long anchor_for_target(long target, long eta, bool ceiling) {
  if (!ceiling) return eta * ((target - 1) / eta);
  const long up = eta * ((target - 1 + eta - 1) / eta);  // eta*ceil((T-1)/eta)
  return std::min(target - 1, up);
}

double loss_value(double r, LossKind kind, double delta) {
  if (kind == LossKind::Squared) return r * r;
  const double a = std::abs(r);
  return a <= delta ? 0.5 * r * r : delta * (a - 0.5 * delta);
}

double loss_derivative(double r, LossKind kind, double delta) {
  if (kind == LossKind::Squared) return 2.0 * r;
  if (r > delta) return delta;
  if (r < -delta) return -delta;
  return r;
}

/// Fused RK4 rollout over the masked linear model. Keeps all per-stage
/// buffers preallocated; optionally records the four stage inputs per substep
/// for the reverse pass.
class ModelStepper {
 public:
  ModelStepper(const Eigen::MatrixXd& A, const FeatureLibrary& lib)
      : A_(A), lib_(lib), n_(A.rows()) {
    k1_.resize(n_);
    k2_.resize(n_);
    k3_.resize(n_);
    k4_.resize(n_);
    u_.resize(n_);
    phi_.resize(lib.p());
  }

  // stages, when non-null, receives rows [4*slot .. 4*slot+3] = u1..u4.
  bool step(const Eigen::VectorXd& x, double h, Eigen::VectorXd& out, Eigen::MatrixXd* stages,
            long slot) {
    if (stages) stages->row(4 * slot) = x.transpose();
    eval_rhs(x, k1_);
    u_ = x + (0.5 * h) * k1_;
    if (stages) stages->row(4 * slot + 1) = u_.transpose();
    eval_rhs(u_, k2_);
    u_ = x + (0.5 * h) * k2_;
    if (stages) stages->row(4 * slot + 2) = u_.transpose();
    eval_rhs(u_, k3_);
    u_ = x + h * k3_;
    if (stages) stages->row(4 * slot + 3) = u_.transpose();
    eval_rhs(u_, k4_);
    out = x + (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    add_rk4_steps(1);
    return out.allFinite();
  }

  // Reverse pass through one recorded substep: v is the adjoint of the
  // substep output; returns (via v) the adjoint of the substep input and
  // accumulates the gradient wrt A.
  void step_vjp(const Eigen::MatrixXd& stages, long slot, double h, Eigen::VectorXd& v,
                Eigen::MatrixXd& grad) {
    const auto u1 = stages.row(4 * slot).transpose();
    const auto u2 = stages.row(4 * slot + 1).transpose();
    const auto u3 = stages.row(4 * slot + 2).transpose();
    const auto u4 = stages.row(4 * slot + 3).transpose();

    vk_ = (h / 6.0) * v;
    const Eigen::VectorXd w4 = stage_vjp(u4, vk_, grad);
    vk_ = (h / 3.0) * v + h * w4;
    const Eigen::VectorXd w3 = stage_vjp(u3, vk_, grad);
    vk_ = (h / 3.0) * v + (0.5 * h) * w3;
    const Eigen::VectorXd w2 = stage_vjp(u2, vk_, grad);
    vk_ = (h / 6.0) * v + (0.5 * h) * w2;
    const Eigen::VectorXd w1 = stage_vjp(u1, vk_, grad);
    v += w1 + w2 + w3 + w4;
  }

 private:
  void eval_rhs(const Eigen::VectorXd& x, Eigen::VectorXd& dxdt) {
    lib_.eval(x, phi_);
    dxdt.noalias() = A_ * phi_;
  }

  // Accumulates kbar (x) Phi(u) into grad and returns Jg(u)^T kbar.
  Eigen::VectorXd stage_vjp(const Eigen::VectorXd& u, const Eigen::VectorXd& kbar,
                            Eigen::MatrixXd& grad) {
    z_.noalias() = A_.transpose() * kbar;
    lib_.eval_and_jacobian_vjp(u, z_, phi_, jtz_);
    grad.noalias() += kbar * phi_.transpose();
    return jtz_;
  }

  const Eigen::MatrixXd& A_;
  const FeatureLibrary& lib_;
  Eigen::Index n_;
  Eigen::VectorXd k1_, k2_, k3_, k4_, u_, phi_, z_, jtz_, vk_;
};

struct Block {
  long anchor;
  long first_target;
  long last_target;  // inclusive
};

std::vector<Block> make_blocks(long num_points, const RolloutOptions& opts) {
  const long limit = (opts.limit > 0 && opts.limit < num_points) ? opts.limit : num_points;
  const long eta = opts.eta <= 0 ? limit : opts.eta;
  std::vector<Block> blocks;
  long target = 1;
  while (target < limit) {
    const long anchor = anchor_for_target(target, eta, opts.anchor_ceiling);
    long last = target;
    while (last + 1 < limit &&
           anchor_for_target(last + 1, eta, opts.anchor_ceiling) == anchor) {
      ++last;
    }
    blocks.push_back({anchor, target, last});
    target = last + 1;
  }
  return blocks;
}

}  // namespace

long eta_anchor(long i, long eta) {
  if (i < 0) throw std::invalid_argument("eta_anchor: index must be >= 0");
  if (eta < 1) throw std::invalid_argument("eta_anchor: eta must be >= 1");
  return eta * (i / eta);
}

long validation_split(long m, double fraction) {
  return static_cast<long>(std::floor(fraction * static_cast<double>(m)));
}

Eigen::MatrixXd predict_states(const Eigen::MatrixXd& effective, const FeatureLibrary& lib,
                               const Trajectory& traj, const RolloutOptions& opts) {
  if (effective.rows() != lib.n() || effective.cols() != lib.p()) {
    throw std::invalid_argument("predict_states: coefficient shape mismatch");
  }
  if (traj.dim() != lib.n()) {
    throw std::invalid_argument("predict_states: trajectory dimension mismatch");
  }
  const Eigen::MatrixXd& obs = traj.states;
  const long m = obs.rows();
  Eigen::MatrixXd pred(m, obs.cols());
  pred.row(0) = obs.row(0);

  ModelStepper stepper(effective, lib);
  const double h = traj.dt / opts.substeps;
  Eigen::VectorXd x(obs.cols()), next(obs.cols());
  for (const Block& blk : make_blocks(m, opts)) {
    x = obs.row(blk.anchor).transpose();
    for (long target = blk.first_target; target <= blk.last_target; ++target) {
      for (int s = 0; s < opts.substeps; ++s) {
        if (!stepper.step(x, h, next, nullptr, 0)) {
          throw IntegrationFailure("predict_states: non-finite rollout",
                                   traj.times[target - 1], target);
        }
        x.swap(next);
      }
      pred.row(target) = x.transpose();
    }
  }
  return pred;
}

namespace {

// Shared forward pass: accumulates the loss and (when grad_out != nullptr)
// runs the reverse sweep per block.
double rollout_loss_impl(const Eigen::MatrixXd& effective, const FeatureLibrary& lib,
                         const Eigen::MatrixXd& states, double dt, const RolloutOptions& opts,
                         Eigen::MatrixXd* grad_out) {
  if (effective.rows() != lib.n() || effective.cols() != lib.p()) {
    throw std::invalid_argument("rollout loss: coefficient shape mismatch");
  }
  if (states.cols() != lib.n()) {
    throw std::invalid_argument("rollout loss: data dimension mismatch");
  }
  const long m = states.rows();
  const Eigen::Index n = states.cols();
  const int k = opts.substeps;
  const double h = dt / k;

  ModelStepper stepper(effective, lib);
  const std::vector<Block> blocks = make_blocks(m, opts);

  long max_block = 0;
  for (const Block& b : blocks) max_block = std::max(max_block, b.last_target - b.anchor);

  Eigen::MatrixXd stages;
  Eigen::MatrixXd dpred;  // per-target dLoss/dprediction within the block
  if (grad_out) {
    stages.resize(4 * k * max_block, n);
    dpred.resize(max_block, n);
  }
  Eigen::MatrixXd local_grad;
  if (grad_out) local_grad = Eigen::MatrixXd::Zero(effective.rows(), effective.cols());

  double total = 0.0;
  Eigen::VectorXd x(n), next(n), v(n);
  for (const Block& blk : blocks) {
    x = states.row(blk.anchor).transpose();
    const long steps_in_block = blk.last_target - blk.anchor;
    for (long target = blk.first_target; target <= blk.last_target; ++target) {
      const long local = target - blk.anchor - 1;  // 0-based step within the block
      for (int s = 0; s < k; ++s) {
        const long slot = local * k + s;
        if (!stepper.step(x, h, next, grad_out ? &stages : nullptr, slot)) return kInf;
        x.swap(next);
      }
      for (Eigen::Index d = 0; d < n; ++d) {
        const double r = x[d] - states(target, d);
        total += loss_value(r, opts.loss, opts.huber_delta);
        if (grad_out) dpred(local, d) = loss_derivative(r, opts.loss, opts.huber_delta);
      }
    }
    if (!std::isfinite(total)) return kInf;

    if (grad_out) {
      v.setZero();
      for (long local = steps_in_block - 1; local >= 0; --local) {
        v += dpred.row(local).transpose();
        for (int s = k - 1; s >= 0; --s) {
          stepper.step_vjp(stages, local * k + s, h, v, local_grad);
        }
      }
    }
  }
  if (grad_out) *grad_out += local_grad;
  return total;
}

}  // namespace

double rollout_loss(const Eigen::MatrixXd& effective, const FeatureLibrary& lib,
                    const Eigen::MatrixXd& states, double dt, const RolloutOptions& opts) {
  return rollout_loss_impl(effective, lib, states, dt, opts, nullptr);
}

double rollout_loss_grad(const Eigen::MatrixXd& effective, const FeatureLibrary& lib,
                         const Eigen::MatrixXd& states, double dt, const RolloutOptions& opts,
                         Eigen::MatrixXd& grad) {
  return rollout_loss_impl(effective, lib, states, dt, opts, &grad);
}

std::pair<double, long> rollout_sq_tail(const Eigen::MatrixXd& effective,
                                        const FeatureLibrary& lib,
                                        const Eigen::MatrixXd& states, double dt, long anchor,
                                        int substeps) {
  const long m = states.rows();
  if (anchor < 0 || anchor >= m - 1) {
    throw std::invalid_argument("rollout_sq_tail: anchor out of range");
  }
  ModelStepper stepper(effective, lib);
  const double h = dt / substeps;
  Eigen::VectorXd x = states.row(anchor).transpose();
  Eigen::VectorXd next(states.cols());
  double sq = 0.0;
  const long entries = (m - 1 - anchor) * states.cols();
  for (long target = anchor + 1; target < m; ++target) {
    for (int s = 0; s < substeps; ++s) {
      if (!stepper.step(x, h, next, nullptr, 0)) return {kInf, entries};
      x.swap(next);
    }
    sq += (x - states.row(target).transpose()).squaredNorm();
  }
  if (!std::isfinite(sq)) return {kInf, entries};
  return {sq, entries};
}

double validation_loss(const Eigen::MatrixXd& effective, const FeatureLibrary& lib,
                       const std::vector<const Trajectory*>& trajs, double val_fraction,
                       int substeps) {
  double sq = 0.0;
  long entries = 0;
  for (const Trajectory* traj : trajs) {
    const long m = traj->num_points();
    if (m < 5) throw std::invalid_argument("validation_loss: trajectory must have m >= 5");
    const long v = validation_split(m, val_fraction);
    if (v < 1 || v >= m) {
      throw std::invalid_argument("validation_loss: split leaves no validation tail");
    }
    auto [s, cnt] = rollout_sq_tail(effective, lib, traj->states, traj->dt, v - 1, substeps);
    if (!std::isfinite(s)) return kInf;
    sq += s;
    entries += cnt;
  }
  if (entries == 0) throw std::invalid_argument("validation_loss: no trajectories");
  return sq / static_cast<double>(entries);
}

}  // namespace dynodisco
