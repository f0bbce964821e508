#include "dynodisco/integrators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace dynodisco {

namespace {

std::atomic<long> g_rk4_steps{0};

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

long rk4_steps_executed() { return g_rk4_steps.load(std::memory_order_relaxed); }
void add_rk4_steps(long n) { g_rk4_steps.fetch_add(n, std::memory_order_relaxed); }
void reset_rk4_step_counter() { g_rk4_steps.store(0, std::memory_order_relaxed); }

long grid_steps(double t_start, double t_end, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("grid_steps: dt must be positive");
  if (t_end <= t_start) throw std::invalid_argument("grid_steps: t_end must exceed t_start");
  return std::lround((t_end - t_start) / dt);
}

Eigen::VectorXd rk4_step(const RhsFunction& rhs, const Eigen::VectorXd& state, double t, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("rk4_step: dt must be positive");
  const Eigen::Index n = state.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), u(n);

  rhs(state, k1, t);
  u = state + (0.5 * dt) * k1;
  rhs(u, k2, t + 0.5 * dt);
  u = state + (0.5 * dt) * k2;
  rhs(u, k3, t + 0.5 * dt);
  u = state + dt * k3;
  rhs(u, k4, t + dt);

  Eigen::VectorXd next = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  add_rk4_steps(1);
  if (!all_finite(k1) || !all_finite(k2) || !all_finite(k3) || !all_finite(k4) || !all_finite(next)) {
    throw IntegrationFailure("rk4_step: non-finite stage", t, 0);
  }
  return next;
}

Eigen::MatrixXd ode_solve(const SolveRequest& req) {
  if (req.dt <= 0.0) throw std::invalid_argument("ode_solve: dt must be positive");
  if (req.t_end <= req.t_start) throw std::invalid_argument("ode_solve: t_end must exceed t_start");
  const long steps = grid_steps(req.t_start, req.t_end, req.dt);
  const Eigen::Index n = req.x0.size();

  Eigen::MatrixXd out(steps + 1, n);
  out.row(0) = req.x0.transpose();
  Eigen::VectorXd x = req.x0;
  for (long i = 0; i < steps; ++i) {
    const double t = req.t_start + static_cast<double>(i) * req.dt;
    try {
      x = rk4_step(req.rhs, x, t, req.dt);
    } catch (const IntegrationFailure&) {
      throw IntegrationFailure("ode_solve: non-finite state", t, i);
    }
    out.row(i + 1) = x.transpose();
  }
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights (error estimate coefficients).
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

struct Dopri5Stepper {
  const RhsFunction& rhs;
  double abs_tol, rel_tol;
  Eigen::VectorXd k1, k2, k3, k4, k5, k6, k7, u, y_new, y_err;

  Dopri5Stepper(const RhsFunction& f, Eigen::Index n, double atol, double rtol)
      : rhs(f), abs_tol(atol), rel_tol(rtol) {
    for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &u, &y_new, &y_err}) v->resize(n);
  }

  // One trial step from (t, y) with size h. Returns the scaled error norm;
  // y_new holds the 5th-order result. k1 must hold rhs(y, t) on entry (FSAL).
  double try_step(const Eigen::VectorXd& y, double t, double h) {
    u = y + h * (a21 * k1);
    rhs(u, k2, t + c2 * h);
    u = y + h * (a31 * k1 + a32 * k2);
    rhs(u, k3, t + c3 * h);
    u = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(u, k4, t + c4 * h);
    u = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(u, k5, t + c5 * h);
    u = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(u, k6, t + h);
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(y_new, k7, t + h);
    y_err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double e = y_err[i] / scale;
      err += e * e;
    }
    return std::sqrt(err / static_cast<double>(y.size()));
  }
};

}  // namespace

Eigen::MatrixXd reference_solve(const RhsFunction& rhs, const Eigen::VectorXd& x0,
                                const Eigen::VectorXd& grid, double abs_tol, double rel_tol) {
  const Eigen::Index m = grid.size();
  if (m < 1) throw std::invalid_argument("reference_solve: empty grid");
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    if (!(grid[i + 1] > grid[i])) {
      throw std::invalid_argument("reference_solve: grid must be strictly increasing");
    }
  }
  const Eigen::Index n = x0.size();
  Eigen::MatrixXd out(m, n);
  out.row(0) = x0.transpose();
  if (m == 1) return out;

  Dopri5Stepper st(rhs, n, abs_tol, rel_tol);
  Eigen::VectorXd y = x0;
  double t = grid[0];
  rhs(y, st.k1, t);
  double h_suggest = (grid[m - 1] - grid[0]) / 100.0;
  long step_index = 0;

  for (Eigen::Index g = 1; g < m; ++g) {
    const double t_target = grid[g];
    while (t < t_target) {
      const bool hits_target = h_suggest >= t_target - t;
      const double h = hits_target ? t_target - t : h_suggest;
      const double h_min = 1e-14 * std::max(1.0, std::abs(t));
      if (h < h_min) {
        throw IntegrationFailure("reference_solve: step size underflow", t, step_index);
      }
      const double err = st.try_step(y, t, h);
      ++step_index;
      if (!std::isfinite(err) || !st.y_new.allFinite()) {
        throw IntegrationFailure("reference_solve: non-finite state", t, step_index);
      }
      if (err <= 1.0) {
        t = hits_target ? t_target : t + h;
        y = st.y_new;
        st.k1 = st.k7;  // FSAL
        const double factor = (err == 0.0) ? 5.0 : 0.9 * std::pow(err, -0.2);
        h_suggest = h * std::clamp(factor, 0.2, 5.0);
      } else {
        h_suggest = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
    }
    out.row(g) = y.transpose();
  }
  return out;
}

}  // namespace dynodisco
