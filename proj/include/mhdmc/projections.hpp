#pragma once

#include <functional>

#include "mhdmc/fields.hpp"

namespace mhdmc {

enum class Smoothness { Continuous, C1 };

/// Closed-form field x -> f(x1, x2), evaluable on the closed domain and slightly beyond
/// the walls (line averages of boundary cells reach h/2 past them).
struct AnalyticScalar {
  std::function<double(double, double)> eval;
  Smoothness smoothness = Smoothness::C1;

  double operator()(double x1, double x2) const { return eval(x1, x2); }
};

struct AnalyticVector {
  AnalyticScalar c1;
  AnalyticScalar c2;
};

/// Pi_Q: cell means by tensor Gauss-Legendre quadrature.
CellField project_cell_mean(const Mesh& mesh, const AnalyticScalar& f);
CellVector project_cell_mean(const Mesh& mesh, const AnalyticVector& f);

/// Pi_B: component i averaged over the length-2h segment through the barycenter
/// orthogonal to e_i (B1 along a vertical segment, B2 along a horizontal one).
CellVector project_line_avg(const Mesh& mesh, const AnalyticVector& B);

/// Pi_E^(i): mean over each face of E^i.
FaceField project_face_mean(const Mesh& mesh, int direction, const AnalyticScalar& f);
/// Pi_W^(i): mean over each dual cell D_sigma, sigma in E^i.
FaceField project_dual_mean(const Mesh& mesh, int direction, const AnalyticScalar& f);

/// Gauss-Legendre mean of f over [a, b].
double segment_mean(const std::function<double(double)>& f, double a, double b);

}  // namespace mhdmc
