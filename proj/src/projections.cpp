#include "mhdmc/projections.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace mhdmc {

namespace {

// 10 nodes: exact for polynomials of degree 19.
using Rule = boost::math::quadrature::gauss<double, 10>;

double rect_mean(const AnalyticScalar& f, double x1a, double x1b, double x2a, double x2b) {
  auto inner = [&](double x2) {
    return Rule::integrate([&](double x1) { return f(x1, x2); }, x1a, x1b);
  };
  return Rule::integrate(inner, x2a, x2b) / ((x1b - x1a) * (x2b - x2a));
}

}  // namespace

double segment_mean(const std::function<double(double)>& f, double a, double b) {
  return Rule::integrate(f, a, b) / (b - a);
}

CellField project_cell_mean(const Mesh& mesh, const AnalyticScalar& f) {
  CellField out(mesh);
  const double h = mesh.h();
  for (int j = 0; j < mesh.nx2(); ++j) {
    for (int i = 0; i < mesh.nx1(); ++i) {
      const auto c = mesh.cell_center(i, j);
      out(i, j) = rect_mean(f, c[0] - 0.5 * h, c[0] + 0.5 * h, c[1] - 0.5 * h, c[1] + 0.5 * h);
    }
  }
  return out;
}

CellVector project_cell_mean(const Mesh& mesh, const AnalyticVector& f) {
  return {project_cell_mean(mesh, f.c1), project_cell_mean(mesh, f.c2)};
}

CellVector project_line_avg(const Mesh& mesh, const AnalyticVector& B) {
  CellVector out(mesh);
  const double h = mesh.h();
  for (int j = 0; j < mesh.nx2(); ++j) {
    for (int i = 0; i < mesh.nx1(); ++i) {
      const auto c = mesh.cell_center(i, j);
      out.c1(i, j) = segment_mean([&](double x2) { return B.c1(c[0], x2); }, c[1] - h, c[1] + h);
      out.c2(i, j) = segment_mean([&](double x1) { return B.c2(x1, c[1]); }, c[0] - h, c[0] + h);
    }
  }
  return out;
}

FaceField project_face_mean(const Mesh& mesh, int direction, const AnalyticScalar& f) {
  FaceField out(mesh, direction);
  const double h = mesh.h();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const FaceIndex face = mesh.face(direction, k);
    const auto x = mesh.face_center(face);
    if (direction == 1) {
      out[k] = segment_mean([&](double x2) { return f(x[0], x2); }, x[1] - 0.5 * h, x[1] + 0.5 * h);
    } else {
      out[k] = segment_mean([&](double x1) { return f(x1, x[1]); }, x[0] - 0.5 * h, x[0] + 0.5 * h);
    }
  }
  return out;
}

FaceField project_dual_mean(const Mesh& mesh, int direction, const AnalyticScalar& f) {
  FaceField out(mesh, direction);
  const double h = mesh.h();
  const Bounds& b = mesh.bounds();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const FaceIndex face = mesh.face(direction, k);
    const auto x = mesh.face_center(face);
    if (direction == 1) {
      out[k] = rect_mean(f, x[0] - 0.5 * h, x[0] + 0.5 * h, x[1] - 0.5 * h, x[1] + 0.5 * h);
    } else {
      // wall dual cells are the half cell inside the domain
      const double lo = face.j == 0 ? b.x2a : x[1] - 0.5 * h;
      const double hi = face.j == mesh.nx2() ? b.x2b : x[1] + 0.5 * h;
      out[k] = rect_mean(f, x[0] - 0.5 * h, x[0] + 0.5 * h, lo, hi);
    }
  }
  return out;
}

}  // namespace mhdmc
