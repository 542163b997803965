#include "mhdmc/physics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mhdmc/discrete_ops.hpp"
#include "mhdmc/projections.hpp"

namespace mhdmc {

void PhysParams::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(lambda + 2.0 * mu / 3.0 >= 0.0)) {
    throw std::invalid_argument("lambda + 2 mu / 3 must be nonnegative");
  }
  if (!(zeta > 0.0)) throw std::invalid_argument("zeta must be positive");
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
  if (!(a > 0.0)) throw std::invalid_argument("pressure coefficient a must be positive");
  if (!(b >= 0.0)) throw std::invalid_argument("pressure coefficient b must be nonnegative");
}

CellVector State::momentum() const {
  return {hadamard(rho, u.c1), hadamard(rho, u.c2)};
}

double pressure(double rho, const PhysParams& phys) {
  if (rho < 0.0) throw std::invalid_argument("pressure of negative density");
  return phys.a * std::pow(rho, phys.gamma) + phys.b * rho;
}

CellField pressure(const CellField& rho, const PhysParams& phys) {
  CellField p(rho.mesh());
  for (std::size_t k = 0; k < rho.size(); ++k) p[k] = pressure(rho[k], phys);
  return p;
}

double pressure_potential(double rho, const PhysParams& phys) {
  if (rho < 0.0) throw std::invalid_argument("pressure potential of negative density");
  if (rho == 0.0) return 0.0;
  return phys.a * std::pow(rho, phys.gamma) / (phys.gamma - 1.0) + phys.b * rho * std::log(rho);
}

double pressure_potential_derivative(double rho, const PhysParams& phys) {
  if (!(rho > 0.0) && phys.b > 0.0) {
    throw std::invalid_argument("P' needs positive density when b > 0");
  }
  double d = phys.a * phys.gamma / (phys.gamma - 1.0) * std::pow(rho, phys.gamma - 1.0);
  if (phys.b > 0.0) d += phys.b * (std::log(rho) + 1.0);
  return d;
}

double pressure_potential_second(double rho, const PhysParams& phys) {
  double d = phys.a * phys.gamma * std::pow(rho, phys.gamma - 2.0);
  if (phys.b > 0.0) d += phys.b / rho;
  return d;
}

double potential_remainder(double r2, double r1, const PhysParams& phys) {
  return pressure_potential(r2, phys) - pressure_potential(r1, phys) -
         pressure_potential_derivative(r1, phys) * (r2 - r1);
}

double wall_profile(double x2, const Bounds& bounds, const PhysParams& phys) {
  const double s = (x2 - bounds.x2a) / bounds.length2();
  return phys.b_minus + (phys.b_plus - phys.b_minus) * s;
}

CellVector wall_extension_field(const Mesh& mesh, const PhysParams& phys) {
  const Bounds bounds = mesh.bounds();
  AnalyticVector BB{{[bounds, phys](double, double x2) { return wall_profile(x2, bounds, phys); }},
                    {[](double, double) { return 0.0; }}};
  return project_line_avg(mesh, BB);
}

std::array<double, 3> wall_extension_3d(const std::array<double, 3>& bm,
                                        const std::array<double, 3>& bp, double x3) {
  return {0.5 * (-bm[1] * (1.0 - x3) + bp[1] * (1.0 + x3)),
          0.5 * (bm[0] * (1.0 - x3) - bp[0] * (1.0 + x3)), 0.0};
}

double energy_density(double rho, double m1, double m2, double B1, double B2,
                      const PhysParams& phys) {
  const double magnetic = 0.5 * (B1 * B1 + B2 * B2);
  if (rho < 0.0) return std::numeric_limits<double>::infinity();
  if (rho == 0.0) {
    return (m1 == 0.0 && m2 == 0.0) ? magnetic : std::numeric_limits<double>::infinity();
  }
  return 0.5 * (m1 * m1 + m2 * m2) / rho + pressure_potential(rho, phys) + magnetic;
}

double total_energy(const State& s, const CellVector& Bref, const PhysParams& phys) {
  std::vector<double> e(s.rho.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double rho = s.rho[k];
    if (rho < 0.0) throw std::invalid_argument("total energy of negative density");
    const double d1 = s.B.c1[k] - Bref.c1[k];
    const double d2 = s.B.c2[k] - Bref.c2[k];
    const double uu = s.u.c1[k] * s.u.c1[k] + s.u.c2[k] * s.u.c2[k];
    e[k] = 0.5 * rho * uu + pressure_potential(rho, phys) + 0.5 * (d1 * d1 + d2 * d2);
  }
  return s.mesh().cell_area() * pairwise_sum(e);
}

double relative_energy(const State& s, const State& ref, const PhysParams& phys) {
  std::vector<double> e(s.rho.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double r = s.rho[k];
    const double rt = ref.rho[k];
    if (!(rt > 0.0)) throw std::invalid_argument("relative energy needs positive reference density");
    if (r < 0.0) throw std::invalid_argument("relative energy of negative density");
    const double du1 = s.u.c1[k] - ref.u.c1[k];
    const double du2 = s.u.c2[k] - ref.u.c2[k];
    const double dB1 = s.B.c1[k] - ref.B.c1[k];
    const double dB2 = s.B.c2[k] - ref.B.c2[k];
    e[k] = 0.5 * r * (du1 * du1 + du2 * du2) + potential_remainder(r, rt, phys) +
           0.5 * (dB1 * dB1 + dB2 * dB2);
  }
  return s.mesh().cell_area() * pairwise_sum(e);
}

}  // namespace mhdmc
