#pragma once

#include <array>

#include "mhdmc/fields.hpp"

namespace mhdmc {

/// Constants of the isentropic viscous resistive MHD model.
struct PhysParams {
  double mu = 0.01;      // shear viscosity
  double lambda = 0.0;   // bulk parameter, lambda + 2 mu / 3 >= 0
  double zeta = 0.01;    // magnetic resistivity
  double gamma = 5.0 / 3.0;
  double a = 1.0;        // p = a rho^gamma + b rho
  double b = 0.0;
  std::array<double, 2> g{0.0, 0.0};
  double b_minus = 0.0;  // B1 on the wall x2 = x2a
  double b_plus = 0.0;   // B1 on the wall x2 = x2b

  double nu() const { return lambda + mu; }

  /// Throws std::invalid_argument if any model constraint is violated.
  void validate() const;
};

/// Cell-centered unknowns at one time level.
struct State {
  CellField rho;
  CellVector u;
  CellVector B;

  State() = default;
  State(CellField rho_, CellVector u_, CellVector B_)
      : rho(std::move(rho_)), u(std::move(u_)), B(std::move(B_)) {}
  explicit State(const Mesh& mesh) : rho(mesh, 1.0), u(mesh), B(mesh) {}

  const Mesh& mesh() const { return rho.mesh(); }
  CellVector momentum() const;
};

double pressure(double rho, const PhysParams& phys);
CellField pressure(const CellField& rho, const PhysParams& phys);

/// P with P'(rho) rho - P(rho) = p(rho), normalized so that P(0) = 0.
double pressure_potential(double rho, const PhysParams& phys);
double pressure_potential_derivative(double rho, const PhysParams& phys);
double pressure_potential_second(double rho, const PhysParams& phys);

/// P(r2) - P(r1) - P'(r1) (r2 - r1), the Bregman remainder of P expanded at r1.
double potential_remainder(double r2, double r1, const PhysParams& phys);

/// Affine profile of B1 between the prescribed wall values.
double wall_profile(double x2, const Bounds& bounds, const PhysParams& phys);

/// Pi_B of the planar extension field B_B = (beta(x2), 0).
CellVector wall_extension_field(const Mesh& mesh, const PhysParams& phys);

/// The three-dimensional extension field for tangential wall data b^{+-} on the slab
/// x3 in [-1, 1].
std::array<double, 3> wall_extension_3d(const std::array<double, 3>& b_minus,
                                        const std::array<double, 3>& b_plus, double x3);

/// Convex energy in conservative variables, extended by +inf for rho < 0 or
/// (rho = 0, m != 0) and by |B|^2/2 for rho = 0, m = 0.
double energy_density(double rho, double m1, double m2, double B1, double B2,
                      const PhysParams& phys);

/// sum_K |K| (rho |u|^2 / 2 + P(rho) + |B - Bref|^2 / 2); throws on negative density.
double total_energy(const State& s, const CellVector& Bref, const PhysParams& phys);

/// Relative energy of s with respect to ref (ref density must be positive).
double relative_energy(const State& s, const State& ref, const PhysParams& phys);

}  // namespace mhdmc
