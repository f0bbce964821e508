#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynodisco/integrators.hpp"
#include "dynodisco/rng.hpp"

namespace dynodisco {

enum class SystemKind { Linear3D, Lorenz, LotkaVolterra, DampedPendulum };

int state_dim(SystemKind kind);
int param_count(SystemKind kind);
const std::vector<std::string>& param_names(SystemKind kind);
std::vector<std::string> state_names(SystemKind kind);
std::string kind_name(SystemKind kind);
SystemKind kind_from_name(const std::string& name);

struct SystemParams {
  SystemKind kind = SystemKind::Linear3D;
  Eigen::VectorXd values;  // ordered as param_names(kind)

  double operator[](int i) const { return values[i]; }
};

using State = Eigen::VectorXd;

struct Trajectory {
  int env_id = 0;
  Eigen::VectorXd times;   // strictly increasing, uniform spacing dt
  Eigen::MatrixXd states;  // m x n
  double dt = 0.0;
  std::optional<SystemParams> params;  // present for generated data

  long num_points() const { return states.rows(); }
  int dim() const { return static_cast<int>(states.cols()); }
};

/// Throws std::invalid_argument when the grid is non-uniform (relative
/// tolerance 1e-9), m < 2, or any state is non-finite.
void validate_trajectory(const Trajectory& traj);

struct Environment {
  int id = 0;
  SystemParams params;
  std::vector<Trajectory> trajectories;
};

/// Generation parameters for one benchmark dataset (the Table-1 layout).
struct DatasetSpec {
  SystemKind kind = SystemKind::Linear3D;
  double train_horizon = 4.0;
  double train_dt = 0.05;
  int num_train_envs = 9;
  int num_train_trajectories = 8;
  double adapt_horizon = 4.0;
  double adapt_dt = 0.05;
  int num_adapt_trajectories = 1;
  double test_horizon = 10.0;
  double test_dt = 0.025;
  int num_test_trajectories = 16;
  int num_heldout_envs = 1;
  Eigen::VectorXd param_mean;   // per-kind default when empty
  double param_variance = 0.0;  // per-kind default when < 0? see benchmark_spec
  std::uint64_t seed = 0;
};

struct Dataset {
  SystemKind kind = SystemKind::Linear3D;
  DatasetSpec spec;
  std::vector<Environment> train;
  std::vector<Environment> adaptation;  // held-out envs, 1 trajectory each by default
  std::vector<Environment> test;        // same env ids and params as adaptation
};

/// dx/dt of the named benchmark system at `state`.
Eigen::VectorXd eval_true_rhs(SystemKind kind, const SystemParams& params, const State& state);

/// RhsFunction wrapper around eval_true_rhs (allocation-free form).
RhsFunction true_rhs_function(SystemKind kind, SystemParams params);

/// Independent Normal(mean_i, variance) draws per parameter. Lorenz rejects
/// and resamples non-positive draws; Lotka-Volterra ignores mean/variance and
/// picks an entry from the fixed CoDA-style grid (see benchmark docs).
SystemParams sample_params(SystemKind kind, const Eigen::VectorXd& mean, double variance,
                           RngStream& rng);

/// Held-out environment sampler: same distribution as training environments,
/// except Lotka-Volterra draws beta, delta uniformly from [0.5, 1.0].
SystemParams sample_heldout_params(SystemKind kind, const Eigen::VectorXd& mean, double variance,
                                   RngStream& rng);

State sample_initial_state(SystemKind kind, RngStream& rng);

/// Integrates the true dynamics with the reference solver over the uniform
/// grid 0, dt, ..., round(horizon/dt)*dt.
Trajectory generate_trajectory(SystemKind kind, const SystemParams& params, const State& x0,
                               double horizon, double dt);

/// Table-1 layout for `kind` (horizons, dts, trajectory and environment
/// counts) plus the Table-2 parameter distribution.
DatasetSpec benchmark_spec(SystemKind kind, std::uint64_t seed);

Dataset build_dataset(const DatasetSpec& spec);
Dataset build_benchmark_dataset(SystemKind kind, std::uint64_t seed);

/// Default parameter mean per kind (Table 2); Lotka-Volterra has no sampled
/// mean and returns the fixed (alpha, gamma) = (0.5, 0.5) plus grid midpoints.
Eigen::VectorXd default_param_mean(SystemKind kind);
double default_param_variance(SystemKind kind);

}  // namespace dynodisco
