#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "mhdmc/fields.hpp"
#include "mhdmc/mesh.hpp"

namespace mhdmc {

/// How the outside trace on a wall face is built from the inside one.
enum class TraceRule {
  Unset,   // no rule registered; touching a wall face is an error
  Odd,     // <f> = 0:      f_out = -f_in
  Even,    // [[f]] = 0:    f_out = f_in
  Average  // <f> = value:  f_out = 2 value - f_in
};

class MissingBoundaryRule : public std::logic_error {
 public:
  explicit MissingBoundaryRule(const std::string& what) : std::logic_error(what) {}
};

/// Scalar ghost rule on the two x2 walls.
struct WallRule {
  TraceRule rule = TraceRule::Unset;
  double bottom = 0.0;
  double top = 0.0;

  double outside(double inside, Wall wall) const {
    switch (rule) {
      case TraceRule::Odd: return -inside;
      case TraceRule::Even: return inside;
      case TraceRule::Average: return 2.0 * (wall == Wall::Bottom ? bottom : top) - inside;
      case TraceRule::Unset: break;
    }
    throw MissingBoundaryRule("no trace rule registered for a wall face");
  }

  /// The linear part of the rule (Average becomes Odd).
  WallRule homogenized() const {
    return rule == TraceRule::Average ? WallRule{TraceRule::Odd, 0.0, 0.0} : *this;
  }
};

struct VectorRule {
  WallRule c1;
  WallRule c2;

  const WallRule& operator[](int comp) const { return comp == 0 ? c1 : c2; }
  VectorRule homogenized() const { return {c1.homogenized(), c2.homogenized()}; }
};

namespace rules {
inline WallRule odd() { return {TraceRule::Odd, 0.0, 0.0}; }
inline WallRule even() { return {TraceRule::Even, 0.0, 0.0}; }
inline WallRule average(double bottom, double top) { return {TraceRule::Average, bottom, top}; }
}  // namespace rules

/// Outside-trace rules of the MHD scheme on the walls: <u> = 0, n x <B> = b^{+-},
/// n . [[B]] = 0, [[p]] = 0, [[div_h u]] = 0 and n x [[u x B - zeta curl_h B]] = 0.
struct BoundaryTraces {
  VectorRule velocity;
  VectorRule magnetic;
  WallRule pressure;
  WallRule velocity_divergence;
  WallRule electric;

  /// b_bottom, b_top: prescribed wall values of B1.
  static BoundaryTraces mhd(double b_bottom, double b_top);
};

struct Traces {
  double in = 0.0;
  double out = 0.0;
};

/// Inside/outside traces on a face. Interior faces are oriented along +e_direction
/// (in = lower cell); on wall faces `in` is the adjacent cell and `out` the ghost.
Traces trace_in_out(const CellField& f, const FaceIndex& face, const WallRule& rule);

inline double jump(const Traces& t) { return t.out - t.in; }
inline double avg(const Traces& t) { return 0.5 * (t.out + t.in); }
double jump(const CellField& f, const FaceIndex& face, const WallRule& rule);
double avg(const CellField& f, const FaceIndex& face, const WallRule& rule);

/// Up[r, u] = r_in [u_sigma]^+ + r_out [u_sigma]^-; u_sigma = 0 selects r_in.
inline double upwind(double r_in, double r_out, double u_sigma) {
  return u_sigma >= 0.0 ? r_in * u_sigma : r_out * u_sigma;
}

/// F_h^eps = Up[r, u] - h^eps [[r]].
double diffusive_flux(double r_in, double r_out, double u_sigma, double h, double eps);

/// Throws std::invalid_argument unless eps > -1.
void check_flux_exponent(double eps);

/// <u> . n_sigma on an interior face.
double normal_velocity(const CellVector& u, const FaceIndex& face);
double upwind(const CellField& r, const CellVector& u, const FaceIndex& face);
double diffusive_flux(const CellField& r, const CellVector& u, const FaceIndex& face,
                      double eps);

/// d_E^(i) f = [[f]]/h on every face of E^i, oriented along +e_i on all faces
/// (including the bottom wall) so that the result approximates the partial derivative.
FaceGradient grad_faces(const CellField& f, const WallRule& rule);

CellVector grad_cells(const CellField& f, const WallRule& rule);
CellField div_cells(const CellVector& v, const VectorRule& rule);
/// Scalar curl of a planar vector: d1 v2 - d2 v1.
CellField curl_vec(const CellVector& v, const VectorRule& rule);
/// Vector curl of a scalar: (d2 s, -d1 s).
CellVector curl_scal(const CellField& s, const WallRule& rule);
CellField laplace_cells(const CellField& f, const WallRule& rule);

/// Pairwise (cascade) summation; the reduction tree depends only on the length.
double pairwise_sum(std::span<const double> values);

double integrate(const CellField& f);
double inner(const CellField& a, const CellField& b);
double inner(const CellVector& a, const CellVector& b);
/// Sum over E^1 and E^2 of |D_sigma| a_sigma b_sigma.
double dual_inner(const FaceGradient& a, const FaceGradient& b);

/// (sum_K |K| |f_K|^p)^(1/p); vector fields use the Euclidean magnitude.
double lp_norm(const CellField& f, double p);
double lp_norm(const CellVector& f, double p);
/// (sum_i sum_{sigma in E^i} |D_sigma| g_sigma^2)^(1/2), summed over all given gradients.
double dual_l2_norm(std::span<const FaceGradient> grads);
double dual_l2_norm(const FaceGradient& grad);

}  // namespace mhdmc
