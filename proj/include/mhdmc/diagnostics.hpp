#pragma once

#include <array>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "mhdmc/observables.hpp"
#include "mhdmc/physics.hpp"

namespace mhdmc {

struct NumParams;

/// The three nonnegative parts of the numerical dissipation.
struct DissipationParts {
  double time = 0.0;           // backward-Euler remainders of P, rho |u|^2 and |B|^2
  double density_jump = 0.0;   // P''(xi) (h^eps + |u_sigma|/2) [[rho]]^2, in exact form
  double velocity_jump = 0.0;  // (rho_up |u_sigma|/2 + h^eps <rho>) |[[u]]|^2

  double total() const { return time + density_jump + velocity_jump; }
};

/// Every term of the discrete energy balance between two consecutive time levels, in
/// rate form.
struct EnergyBalance {
  double energy_prev = 0.0;
  double energy_next = 0.0;
  double rate = 0.0;       // (E_next - E_prev) / dt
  double viscous = 0.0;    // mu |grad_E u|^2
  double bulk = 0.0;       // nu |div_h u|^2
  double resistive = 0.0;  // zeta |curl_h B|^2
  DissipationParts dnum;
  double boundary_work = 0.0;  // -int (u x B - zeta curl_h B) curl_h Pi_B B_B
  double gravity_work = 0.0;   // int rho u . g
  double residual = 0.0;       // |lhs - rhs|

  double lhs() const { return rate + viscous + bulk + resistive + dnum.total(); }
  double rhs() const { return boundary_work + gravity_work; }
};

DissipationParts numerical_dissipation(const State& prev, const State& next, double dt,
                                       const PhysParams& phys, double eps);

EnergyBalance energy_balance(const State& prev, const State& next, double dt,
                             const PhysParams& phys, const NumParams& num, const CellVector& bref);
EnergyBalance energy_balance(const State& prev, const State& next, double dt,
                             const PhysParams& phys, const NumParams& num);
double energy_residual(const State& prev, const State& next, double dt, const PhysParams& phys,
                       const NumParams& num);

/// Both sides of the renormalized continuity identity for b(rho) = rho^2.
struct RenormalizedBalance {
  double lhs = 0.0;  // int D_t b + (rho b' - b) div_h u
  double rhs = 0.0;  // -dt int |D_t rho|^2 - sum_sigma |sigma| 2 [[rho]]^2 (h^eps + |u_sigma|/2)
};
RenormalizedBalance renormalized_continuity(const State& prev, const State& next, double dt,
                                            double eps);

/// Norms tracked for the uniform bounds.
struct UniformBounds {
  double rho_lgamma = 0.0;
  double momentum = 0.0;  // |rho u| in L^{2 gamma / (gamma + 1)}
  double u = 0.0;
  double grad_u = 0.0;
  double div_u = 0.0;
  double B = 0.0;
  double curl_B = 0.0;

  std::array<double, 7> values() const {
    return {rho_lgamma, momentum, u, grad_u, div_u, B, curl_B};
  }
};
UniformBounds uniform_bounds(const State& s, const PhysParams& phys);

struct DiagnosticsRecord {
  int step = 0;
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  DissipationParts dnum;
  double energy_residual = 0.0;
  double min_rho = 0.0;
  double max_rho = 0.0;
  double div_b_max = 0.0;
  double b_max = 0.0;
  int picard_iters = 0;
  UniformBounds bounds;
};

DiagnosticsRecord make_record(int step, double time, const State& s, const CellVector& bref,
                              const PhysParams& phys);

/// Column names of the per-step diagnostics CSV.
std::vector<std::string> diagnostics_columns();
void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r);

/// Deterministic refinement study problem.
struct ErrorProblem {
  Bounds bounds;
  PhysParams phys;
  double T = 0.0;
  std::function<State(const Mesh&)> initial;
};

struct ErrorTableRow {
  int nx1 = 0;
  double h = 0.0;
  std::array<double, 6> errors{};  // rho, m, B in L^inf(L^p); u, grad_E u, curl_h B in L^2(L^2)
  std::array<double, 6> rates{};   // log2(e_{2h} / e_h); NaN on the first row
};

/// Runs every grid in lockstep with the reference and accumulates the error norms of
/// the restricted reference against each coarse solution at the coarse time levels.
std::vector<ErrorTableRow> deterministic_error_table(const ErrorProblem& problem,
                                                     const NumParams& num,
                                                     const std::vector<int>& nx1_list,
                                                     int nx1_ref);

/// Error table from precomputed trajectories (level k at index k, k = 0..N).
std::vector<ErrorTableRow> error_table_from_trajectories(
    const std::vector<std::vector<State>>& coarse, const std::vector<State>& reference,
    const std::vector<double>& dts, const PhysParams& phys);

double observed_rate(double e_coarse, double e_fine);

void write_error_table(std::ostream& os, const std::vector<ErrorTableRow>& rows);

struct TimedValue {
  double time = 0.0;
  double value = 0.0;
};

/// Relative energy of each coarse snapshot with respect to the restricted reference
/// snapshot at the same time.
std::vector<TimedValue> relative_energy_curve(const std::vector<std::pair<double, State>>& traj,
                                              const std::vector<std::pair<double, State>>& ref,
                                              const PhysParams& phys);

}  // namespace mhdmc
