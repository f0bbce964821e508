#pragma once

#include <Eigen/Dense>
#include <functional>

#include "dynodisco/errors.hpp"

namespace dynodisco {

/// Right-hand side contract: fills dxdt (same length as x) for state x at
/// time t. The odeint-style out-parameter keeps rollouts allocation-free.
using RhsFunction = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& dxdt, double t)>;

struct SolveRequest {
  Eigen::VectorXd x0;
  RhsFunction rhs;
  double t_start = 0.0;
  double t_end = 0.0;
  double dt = 0.0;
};

/// Classical RK4 update over one step of size dt.
/// Throws IntegrationFailure if any stage is non-finite.
Eigen::VectorXd rk4_step(const RhsFunction& rhs, const Eigen::VectorXd& state, double t, double dt);

/// Fixed-step RK4 over the uniform grid t_start, t_start+dt, ..., t_end.
/// Returns one row per grid point; row 0 is x0.
Eigen::MatrixXd ode_solve(const SolveRequest& req);

/// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) sub-stepped exactly
/// onto `grid`. Used as the data-generation oracle with tight tolerances.
Eigen::MatrixXd reference_solve(const RhsFunction& rhs, const Eigen::VectorXd& x0,
                                const Eigen::VectorXd& grid, double abs_tol = 1e-10,
                                double rel_tol = 1e-9);

/// Number of grid steps between t_start and t_end: round((t_end-t_start)/dt).
long grid_steps(double t_start, double t_end, double dt);

/// Monotone counter of RK4 stages executed process-wide (both the generic
/// solver and the model rollout engine bump it). Deterministic work metric
/// for the horizon sweep's time sanity check.
long rk4_steps_executed();
void add_rk4_steps(long n);
void reset_rk4_step_counter();

}  // namespace dynodisco
