#include "dynodisco/systems.hpp"

#include <cmath>
#include <stdexcept>

#include "dynodisco/log.hpp"

namespace dynodisco {

namespace {

// Lotka-Volterra environment grid (CoDA-style stand-in): alpha = gamma = 0.5
// fixed, (beta, delta) on {0.5, 0.75, 1.0}^2.
constexpr double kLvFixed = 0.5;
constexpr double kLvGrid[3] = {0.5, 0.75, 1.0};

SystemParams lv_grid_params(int combo) {
  SystemParams p;
  p.kind = SystemKind::LotkaVolterra;
  p.values.resize(4);
  p.values << kLvFixed, kLvGrid[(combo / 3) % 3], kLvFixed, kLvGrid[combo % 3];
  return p;
}

}  // namespace

int state_dim(SystemKind kind) {
  switch (kind) {
    case SystemKind::Linear3D:
    case SystemKind::Lorenz:
      return 3;
    case SystemKind::LotkaVolterra:
    case SystemKind::DampedPendulum:
      return 2;
  }
  throw std::invalid_argument("state_dim: unknown kind");
}

int param_count(SystemKind kind) {
  switch (kind) {
    case SystemKind::Linear3D:
      return 5;
    case SystemKind::Lorenz:
      return 3;
    case SystemKind::LotkaVolterra:
      return 4;
    case SystemKind::DampedPendulum:
      return 2;
  }
  throw std::invalid_argument("param_count: unknown kind");
}

const std::vector<std::string>& param_names(SystemKind kind) {
  static const std::vector<std::string> linear = {"alpha", "beta", "gamma", "delta", "omega"};
  static const std::vector<std::string> lorenz = {"sigma", "rho", "beta"};
  static const std::vector<std::string> lv = {"alpha", "beta", "gamma", "delta"};
  static const std::vector<std::string> dp = {"alpha", "omega0"};
  switch (kind) {
    case SystemKind::Linear3D:
      return linear;
    case SystemKind::Lorenz:
      return lorenz;
    case SystemKind::LotkaVolterra:
      return lv;
    case SystemKind::DampedPendulum:
      return dp;
  }
  throw std::invalid_argument("param_names: unknown kind");
}

std::vector<std::string> state_names(SystemKind kind) {
  switch (kind) {
    case SystemKind::Linear3D:
      return {"x0", "x1", "x2"};
    case SystemKind::Lorenz:
      return {"x", "y", "z"};
    case SystemKind::LotkaVolterra:
      return {"u", "v"};
    case SystemKind::DampedPendulum:
      return {"theta", "dtheta"};
  }
  throw std::invalid_argument("state_names: unknown kind");
}

std::string kind_name(SystemKind kind) {
  switch (kind) {
    case SystemKind::Linear3D:
      return "linear";
    case SystemKind::Lorenz:
      return "lorenz";
    case SystemKind::LotkaVolterra:
      return "lotka-volterra";
    case SystemKind::DampedPendulum:
      return "damped-pendulum";
  }
  throw std::invalid_argument("kind_name: unknown kind");
}

SystemKind kind_from_name(const std::string& name) {
  if (name == "linear") return SystemKind::Linear3D;
  if (name == "lorenz") return SystemKind::Lorenz;
  if (name == "lotka-volterra") return SystemKind::LotkaVolterra;
  if (name == "damped-pendulum") return SystemKind::DampedPendulum;
  throw std::invalid_argument("unknown system '" + name +
                              "' (expected linear|lorenz|lotka-volterra|damped-pendulum)");
}

void validate_trajectory(const Trajectory& traj) {
  const long m = traj.num_points();
  if (m < 2) throw std::invalid_argument("trajectory must have at least 2 points");
  if (traj.times.size() != m) throw std::invalid_argument("times/states length mismatch");
  if (!(traj.dt > 0.0)) throw std::invalid_argument("trajectory dt must be positive");
  const double tol = 1e-9 * traj.dt;
  for (long i = 0; i + 1 < m; ++i) {
    const double gap = traj.times[i + 1] - traj.times[i];
    if (std::abs(gap - traj.dt) > tol) {
      throw std::invalid_argument("trajectory grid is not uniform");
    }
  }
  if (!traj.states.allFinite()) throw std::invalid_argument("trajectory has non-finite states");
}

Eigen::VectorXd eval_true_rhs(SystemKind kind, const SystemParams& params, const State& state) {
  if (state.size() != state_dim(kind)) {
    throw std::invalid_argument("eval_true_rhs: state dimension mismatch");
  }
  if (params.values.size() != param_count(kind)) {
    throw std::invalid_argument("eval_true_rhs: parameter count mismatch");
  }
  Eigen::VectorXd dxdt(state.size());
  switch (kind) {
    case SystemKind::Linear3D: {
      const double a = params[0], b = params[1], g = params[2], d = params[3], w = params[4];
      dxdt[0] = a * state[0] + b * state[1];
      dxdt[1] = g * state[0] + d * state[1];
      dxdt[2] = w * state[2];
      break;
    }
    case SystemKind::Lorenz: {
      const double sigma = params[0], rho = params[1], beta = params[2];
      dxdt[0] = sigma * (state[1] - state[0]);
      dxdt[1] = state[0] * (rho - state[2]) - state[1];
      dxdt[2] = state[0] * state[1] - beta * state[2];
      break;
    }
    case SystemKind::LotkaVolterra: {
      const double a = params[0], b = params[1], g = params[2], d = params[3];
      dxdt[0] = a * state[0] - b * state[0] * state[1];
      dxdt[1] = d * state[0] * state[1] - g * state[1];
      break;
    }
    case SystemKind::DampedPendulum: {
      const double a = params[0], w0 = params[1];
      dxdt[0] = state[1];
      dxdt[1] = -a * state[1] - w0 * w0 * std::sin(state[0]);
      break;
    }
  }
  return dxdt;
}

RhsFunction true_rhs_function(SystemKind kind, SystemParams params) {
  return [kind, params = std::move(params)](const Eigen::VectorXd& x, Eigen::VectorXd& dxdt,
                                            double /*t*/) {
    dxdt = eval_true_rhs(kind, params, x);
  };
}

SystemParams sample_params(SystemKind kind, const Eigen::VectorXd& mean, double variance,
                           RngStream& rng) {
  if (variance < 0.0) throw std::invalid_argument("sample_params: variance must be >= 0");
  if (kind == SystemKind::LotkaVolterra) {
    return lv_grid_params(rng.uniform_int(0, 8));
  }
  if (mean.size() != param_count(kind)) {
    throw std::invalid_argument("sample_params: mean length mismatch");
  }
  const double sd = std::sqrt(variance);
  SystemParams p;
  p.kind = kind;
  p.values.resize(mean.size());
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (Eigen::Index i = 0; i < mean.size(); ++i) p.values[i] = rng.normal(mean[i], sd);
    if (kind != SystemKind::Lorenz) return p;
    if ((p.values.array() > 0.0).all()) return p;  // sigma, rho, beta > 0
  }
  throw std::runtime_error("sample_params: could not draw positive Lorenz parameters");
}

SystemParams sample_heldout_params(SystemKind kind, const Eigen::VectorXd& mean, double variance,
                                   RngStream& rng) {
  if (kind == SystemKind::LotkaVolterra) {
    SystemParams p;
    p.kind = kind;
    p.values.resize(4);
    p.values << kLvFixed, rng.uniform(0.5, 1.0), kLvFixed, rng.uniform(0.5, 1.0);
    return p;
  }
  return sample_params(kind, mean, variance, rng);
}

State sample_initial_state(SystemKind kind, RngStream& rng) {
  const int n = state_dim(kind);
  State x(n);
  switch (kind) {
    case SystemKind::Linear3D:
    case SystemKind::Lorenz:
      for (int i = 0; i < n; ++i) x[i] = rng.normal(0.0, 1.0);
      break;
    case SystemKind::LotkaVolterra:
      for (int i = 0; i < n; ++i) {
        do {
          x[i] = rng.normal(1.0, 1.0);
        } while (x[i] <= 0.0);  // populations must stay in the positive quadrant
      }
      break;
    case SystemKind::DampedPendulum: {
      double theta;
      do {
        theta = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
      } while (std::abs(theta) < 0.1);  // keep away from the stable equilibrium
      x[0] = theta;
      x[1] = 0.0;
      break;
    }
  }
  return x;
}

Trajectory generate_trajectory(SystemKind kind, const SystemParams& params, const State& x0,
                               double horizon, double dt) {
  if (!(horizon > 0.0)) throw std::invalid_argument("generate_trajectory: horizon must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("generate_trajectory: dt must be > 0");
  const long steps = grid_steps(0.0, horizon, dt);
  const long m = steps + 1;

  Trajectory traj;
  traj.dt = dt;
  traj.times.resize(m);
  for (long i = 0; i < m; ++i) traj.times[i] = static_cast<double>(i) * dt;
  traj.states = reference_solve(true_rhs_function(kind, params), x0, traj.times);
  traj.params = params;
  return traj;
}

Eigen::VectorXd default_param_mean(SystemKind kind) {
  Eigen::VectorXd mean(param_count(kind));
  switch (kind) {
    case SystemKind::Linear3D:
      mean << -0.1, 2.0, -2.0, -0.1, -0.3;
      break;
    case SystemKind::Lorenz:
      mean << 10.0, 28.0, 8.0 / 3.0;
      break;
    case SystemKind::LotkaVolterra:
      mean << kLvFixed, 0.75, kLvFixed, 0.75;  // nominal grid midpoint; sampling uses the grid
      break;
    case SystemKind::DampedPendulum:
      mean << 0.5, 0.98;
      break;
  }
  return mean;
}

double default_param_variance(SystemKind kind) {
  switch (kind) {
    case SystemKind::Linear3D:
      return 0.01;
    case SystemKind::Lorenz:
      return 0.02;
    case SystemKind::LotkaVolterra:
      return 0.0;  // grid-based environments
    case SystemKind::DampedPendulum:
      return 0.01;
  }
  return 0.0;
}

DatasetSpec benchmark_spec(SystemKind kind, std::uint64_t seed) {
  DatasetSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  spec.param_mean = default_param_mean(kind);
  spec.param_variance = default_param_variance(kind);
  switch (kind) {
    case SystemKind::Linear3D:
      spec.train_horizon = 4.0;
      spec.train_dt = 0.05;
      spec.num_train_envs = 9;
      spec.num_train_trajectories = 8;
      spec.adapt_horizon = 4.0;
      spec.adapt_dt = 0.05;
      spec.test_horizon = 10.0;
      spec.test_dt = 0.025;
      spec.num_test_trajectories = 16;
      break;
    case SystemKind::Lorenz:
      spec.train_horizon = 4.0;
      spec.train_dt = 0.05;
      spec.num_train_envs = 9;
      spec.num_train_trajectories = 12;
      spec.adapt_horizon = 4.0;
      spec.adapt_dt = 0.05;
      spec.test_horizon = 10.0;
      spec.test_dt = 0.025;
      spec.num_test_trajectories = 16;
      break;
    case SystemKind::LotkaVolterra:
      spec.train_horizon = 10.0;
      spec.train_dt = 0.30;
      spec.num_train_envs = 9;
      spec.num_train_trajectories = 4;
      spec.adapt_horizon = 10.0;
      spec.adapt_dt = 0.30;
      spec.test_horizon = 25.0;
      spec.test_dt = 0.15;
      spec.num_test_trajectories = 32;
      break;
    case SystemKind::DampedPendulum:
      spec.train_horizon = 4.0;
      spec.train_dt = 0.20;
      spec.num_train_envs = 9;
      spec.num_train_trajectories = 8;
      spec.adapt_horizon = 4.0;
      spec.adapt_dt = 0.20;
      spec.test_horizon = 10.0;
      spec.test_dt = 0.10;
      spec.num_test_trajectories = 32;
      break;
  }
  spec.num_adapt_trajectories = 1;
  spec.num_heldout_envs = 1;
  return spec;
}

namespace {

Environment make_environment(const DatasetSpec& spec, int env_id, const SystemParams& params,
                             RngStream x0_stream, int count, double horizon, double dt) {
  Environment env;
  env.id = env_id;
  env.params = params;
  env.trajectories.reserve(count);
  for (int t = 0; t < count; ++t) {
    const State x0 = sample_initial_state(spec.kind, x0_stream);
    Trajectory traj = generate_trajectory(spec.kind, params, x0, horizon, dt);
    traj.env_id = env_id;
    env.trajectories.push_back(std::move(traj));
  }
  return env;
}

}  // namespace

Dataset build_dataset(const DatasetSpec& spec_in) {
  DatasetSpec spec = spec_in;
  if (spec.param_mean.size() == 0) spec.param_mean = default_param_mean(spec.kind);
  if (spec.param_mean.size() != param_count(spec.kind)) {
    throw std::invalid_argument("build_dataset: param_mean length mismatch");
  }

  Dataset ds;
  ds.kind = spec.kind;
  ds.spec = spec;
  RngStream root(spec.seed);

  RngStream train_params = root.substream("dataset/train-params");
  for (int e = 0; e < spec.num_train_envs; ++e) {
    SystemParams params;
    if (spec.kind == SystemKind::LotkaVolterra) {
      params = lv_grid_params(e % 9);  // enumerate the grid; wraps if more envs requested
    } else {
      params = sample_params(spec.kind, spec.param_mean, spec.param_variance, train_params);
    }
    ds.train.push_back(make_environment(spec, e, params,
                                        root.substream("dataset/train-x0", e),
                                        spec.num_train_trajectories, spec.train_horizon,
                                        spec.train_dt));
  }

  RngStream heldout_params = root.substream("dataset/heldout-params");
  for (int h = 0; h < spec.num_heldout_envs; ++h) {
    const int env_id = spec.num_train_envs + h;
    const SystemParams params =
        sample_heldout_params(spec.kind, spec.param_mean, spec.param_variance, heldout_params);
    ds.adaptation.push_back(make_environment(spec, env_id, params,
                                             root.substream("dataset/adapt-x0", env_id),
                                             spec.num_adapt_trajectories, spec.adapt_horizon,
                                             spec.adapt_dt));
    ds.test.push_back(make_environment(spec, env_id, params,
                                       root.substream("dataset/test-x0", env_id),
                                       spec.num_test_trajectories, spec.test_horizon,
                                       spec.test_dt));
  }

  log_info("built %s dataset: %d train envs x %d trajectories, %d held-out env(s)",
           kind_name(spec.kind).c_str(), spec.num_train_envs, spec.num_train_trajectories,
           spec.num_heldout_envs);
  return ds;
}

Dataset build_benchmark_dataset(SystemKind kind, std::uint64_t seed) {
  return build_dataset(benchmark_spec(kind, seed));
}

}  // namespace dynodisco
