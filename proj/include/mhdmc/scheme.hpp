#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "mhdmc/discrete_ops.hpp"
#include "mhdmc/physics.hpp"

namespace mhdmc {

enum class LinearSolver { Iterative, Dense };

/// Discretization and solver controls.
struct NumParams {
  double eps_flux = 0.0;    // artificial diffusion exponent in F_h^eps
  double dt_factor = 0.1;   // dt = dt_factor * h
  double picard_tol = 1e-9;
  int picard_max = 50;
  double lin_tol = 1e-11;
  int lin_max = 5000;
  LinearSolver solver = LinearSolver::Iterative;
  int max_halvings = 3;

  void validate() const;

  /// eps = -6/13, the optimal-rate choice for gamma = 5/3.
  static NumParams rate_study();
};

struct StepReport {
  int step = 0;
  double time = 0.0;
  double dt = 0.0;
  int substeps = 1;
  int picard_iters = 0;
  double increment = 0.0;
  int linear_iters = 0;
  double mass_before = 0.0;
  double mass_after = 0.0;
  double min_rho = 0.0;
  double energy_residual = 0.0;
  double div_b_max = 0.0;
};

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};
class PicardDiverged : public SolverError {
 public:
  using SolverError::SolverError;
};
class LinearSolveFailed : public SolverError {
 public:
  using SolverError::SolverError;
};
class PositivityLost : public SolverError {
 public:
  using SolverError::SolverError;
};

struct StepResult {
  State state;
  StepReport report;
};

using SparseMat = Eigen::SparseMatrix<double>;

/// Implicit upwind FV stepper for one mesh and parameter set. The constant parts of the
/// linear subproblems are assembled once; the instance is immutable and may be shared.
class Stepper {
 public:
  Stepper(const Mesh& mesh, const PhysParams& phys, const NumParams& num);

  const Mesh& mesh() const { return mesh_; }
  const PhysParams& phys() const { return phys_; }
  const NumParams& num() const { return num_; }
  const BoundaryTraces& traces() const { return traces_; }
  /// Pi_B B_B, the reference field of the energy functional.
  const CellVector& reference_field() const { return bref_; }

  /// One pass rho -> u -> B around the frozen iterate.
  State picard_sweep(const State& iterate, const State& prev, double dt,
                     int* linear_iters = nullptr) const;

  /// One backward-Euler step of size dt without step-size control.
  StepResult step(const State& prev, double dt) const;

  /// One step of size dt; Picard or linear failures are retried as 2^k aligned substeps
  /// for k up to max_halvings.
  StepResult advance(const State& prev, double dt) const;

  /// Density system matrix I + dt T(u) for the frozen transporting velocity u.
  SparseMat transport_matrix(const CellVector& u, double dt) const;

 private:
  Eigen::VectorXd solve(const SparseMat& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x0,
                        int* iters) const;
  StepResult advance_level(const State& prev, double dt, int level) const;

  Mesh mesh_;
  PhysParams phys_;
  NumParams num_;
  BoundaryTraces traces_;
  CellVector bref_;
  SparseMat visc_;   // -mu Lap - nu grad div on [u1; u2]
  SparseMat d1e_, d2e_;
  SparseMat curl_s_; // curl_scal with even ghosts, (2N x N)
  SparseMat kc_c_;   // homogenized curl_vec composed with curl_scal (N x N)
};

struct TimeGrid {
  int steps = 0;
  double dt = 0.0;
};

/// N_T = ceil(T / (dt_factor h)) equal steps that land exactly on T.
TimeGrid time_grid(const Mesh& mesh, const NumParams& num, double T_final);

/// Single step with dt = dt_factor * h.
StepResult advance(const State& prev, const PhysParams& phys, const NumParams& num);

using StepObserver = std::function<void(const State& prev, const State& next, const StepReport&)>;

struct RunOptions {
  std::vector<double> snapshot_times;
  StepObserver observer;
};

struct Snapshot {
  double time = 0.0;
  State state;
};

struct RunResult {
  State final_state;
  std::vector<StepReport> reports;
  std::vector<Snapshot> snapshots;
};

RunResult run(const State& initial, const PhysParams& phys, const NumParams& num, double T_final,
              const RunOptions& options = {});
RunResult run(const Stepper& stepper, const State& initial, double T_final,
              const RunOptions& options = {});

/// Discrete L^2 norm of a state over (rho, u, B) combined.
double state_l2(const State& s);
double state_l2_distance(const State& a, const State& b);

}  // namespace mhdmc
