#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "mhdmc/fields.hpp"
#include "mhdmc/mesh.hpp"
#include "mhdmc/projections.hpp"

namespace mhdmc::testing {

inline Mesh unit_square(int n) { return build_mesh(n, n, Bounds{0.0, 1.0, 0.0, 1.0}); }
inline Mesh sine_domain(int n) { return build_mesh(n, n, Bounds{-1.0, 1.0, -1.0, 1.0}); }

inline CellField random_field(const Mesh& m, std::mt19937_64& gen, double lo = -1.0,
                              double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  CellField f(m);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = d(gen);
  return f;
}

inline CellVector random_vector(const Mesh& m, std::mt19937_64& gen, double lo = -1.0,
                                double hi = 1.0) {
  CellField a = random_field(m, gen, lo, hi);
  CellField b = random_field(m, gen, lo, hi);
  return CellVector(std::move(a), std::move(b));
}

/// Stream function cos(m pi (x2 - x2a) / L2) (c cos(k w x1) + s sin(k w x1)), w = 2 pi / L1,
/// and B = (d2 psi, -d1 psi). The x2 profile has zero normal derivative on both walls.
inline AnalyticVector stream_field(const Bounds& b, int k, int m, double c, double s) {
  const double w = 2.0 * std::numbers::pi / b.length1();
  const double q = m * std::numbers::pi / b.length2();
  auto along = [=](double x1) {
    return c * std::cos(k * w * (x1 - b.x1a)) + s * std::sin(k * w * (x1 - b.x1a));
  };
  auto along_d = [=](double x1) {
    return k * w * (-c * std::sin(k * w * (x1 - b.x1a)) + s * std::cos(k * w * (x1 - b.x1a)));
  };
  return AnalyticVector{
      {[=](double x1, double x2) { return -q * std::sin(q * (x2 - b.x2a)) * along(x1); }},
      {[=](double x1, double x2) { return -std::cos(q * (x2 - b.x2a)) * along_d(x1); }}};
}

inline double max_abs_diff(const CellField& a, const CellField& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]));
  return e;
}

inline double max_abs_diff(const CellVector& a, const CellVector& b) {
  return std::max(max_abs_diff(a.c1, b.c1), max_abs_diff(a.c2, b.c2));
}

}  // namespace mhdmc::testing
