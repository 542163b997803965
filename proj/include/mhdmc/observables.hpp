#pragma once

#include <array>
#include <string>
#include <vector>

#include "mhdmc/discrete_ops.hpp"
#include "mhdmc/physics.hpp"

namespace mhdmc {

/// The six quantities of the error studies.
enum class Observable { Rho, Momentum, MagneticField, Velocity, VelocityGradient, Current };

inline constexpr std::array<Observable, 6> kObservables = {
    Observable::Rho,      Observable::Momentum,         Observable::MagneticField,
    Observable::Velocity, Observable::VelocityGradient, Observable::Current};

std::string observable_name(Observable o);
/// Integrability exponent p of the error norm: gamma, 2 gamma/(gamma+1), then 2.
double observable_exponent(Observable o, double gamma);

/// One observable sampled on one mesh. Cell observables carry 1 or 2 cell components;
/// the velocity gradient carries 4 face components ordered
/// (d1 u1 on E^1, d2 u1 on E^2, d1 u2 on E^1, d2 u2 on E^2).
struct Observation {
  Observable kind = Observable::Rho;
  Mesh mesh;
  std::vector<std::vector<double>> comps;

  std::size_t value_count() const;
};

/// Direction (1 or 2) of face component c of the velocity gradient.
inline int gradient_direction(std::size_t c) { return c % 2 == 0 ? 1 : 2; }

Observation observe(const State& s, Observable kind, const BoundaryTraces& traces);
std::array<Observation, 6> observe_all(const State& s, const BoundaryTraces& traces);

/// Observation with every value zero, laid out for kind on mesh.
Observation zero_observation(Observable kind, const Mesh& mesh);

/// Exact averaging from a nested finer mesh: cell means over children, and for face
/// components the overlap-weighted mean over the fine dual cells covering each coarse
/// dual cell.
Observation restrict_to(const Observation& fine, const Mesh& coarse);
CellField restrict_to(const CellField& fine, const Mesh& coarse);
State restrict_to(const State& fine, const Mesh& coarse);

/// Integer ratio fine/coarse; throws std::invalid_argument for non-nested meshes.
int refinement_ratio(const Mesh& fine, const Mesh& coarse);

/// L^p norm: Euclidean magnitude of cell components over |K|, or of the face components
/// sharing a dual cell over |D_sigma|.
double norm(const Observation& o, double p);

/// y += a x
void axpy(Observation& y, double a, const Observation& x);
void scale(Observation& y, double a);
Observation difference(const Observation& a, const Observation& b);
/// Componentwise absolute value.
Observation abs_values(const Observation& a);

/// Pointwise mean over samples (pairwise summation in sample order).
Observation mean_of(const std::vector<const Observation*>& samples);
/// Pointwise mean absolute deviation about the given mean, componentwise.
Observation mean_abs_deviation(const std::vector<const Observation*>& samples,
                               const Observation& mean);

}  // namespace mhdmc
