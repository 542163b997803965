#include "mhdmc/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mhdmc {

Mesh::Mesh(int nx1, int nx2, Bounds bounds) : nx1_(nx1), nx2_(nx2), bounds_(bounds) {
  if (nx1 < 2 || nx2 < 2) {
    throw std::invalid_argument("mesh needs at least 2 cells per direction");
  }
  if (!(bounds.length1() > 0.0) || !(bounds.length2() > 0.0)) {
    throw std::invalid_argument("mesh bounds must have positive extent");
  }
  const double h1 = bounds.length1() / nx1;
  const double h2 = bounds.length2() / nx2;
  if (std::abs(h1 - h2) > 1e-12 * std::max(h1, h2)) {
    throw std::invalid_argument("mesh cells are not square: h1=" + std::to_string(h1) +
                                " h2=" + std::to_string(h2));
  }
  h_ = h1;
}

Neighbors Mesh::neighbors(int i, int j) const {
  Neighbors n;
  n.west = {wrap1(i - 1), j, false};
  n.east = {wrap1(i + 1), j, false};
  n.south = {i, j - 1, j == 0};
  n.north = {i, j + 1, j == nx2_ - 1};
  return n;
}

std::size_t Mesh::face_count(int direction) const {
  if (direction == 1) return static_cast<std::size_t>(nx1_) * nx2_;
  if (direction == 2) return static_cast<std::size_t>(nx1_) * (nx2_ + 1);
  throw std::invalid_argument("face direction must be 1 or 2");
}

std::size_t Mesh::interior_face_count() const {
  return face_count(1) + static_cast<std::size_t>(nx1_) * (nx2_ - 1);
}

std::size_t Mesh::face_id(const FaceIndex& f) const {
  return static_cast<std::size_t>(f.j) * nx1_ + f.i;
}

FaceIndex Mesh::face(int direction, std::size_t id) const {
  FaceIndex f;
  f.direction = direction;
  f.i = static_cast<int>(id % nx1_);
  f.j = static_cast<int>(id / nx1_);
  f.kind = (direction == 2 && (f.j == 0 || f.j == nx2_)) ? FaceKind::Exterior
                                                          : FaceKind::Interior;
  return f;
}

std::vector<FaceIndex> Mesh::faces(int direction) const {
  std::vector<FaceIndex> out;
  const std::size_t n = face_count(direction);
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(face(direction, k));
  return out;
}

std::array<double, 2> Mesh::face_center(const FaceIndex& f) const {
  if (f.direction == 1) {
    return {bounds_.x1a + f.i * h_, bounds_.x2a + (f.j + 0.5) * h_};
  }
  return {bounds_.x1a + (f.i + 0.5) * h_, bounds_.x2a + f.j * h_};
}

std::array<CellRef, 2> Mesh::face_cells(const FaceIndex& f) const {
  if (f.direction == 1) {
    return {CellRef{wrap1(f.i - 1), f.j, false}, CellRef{f.i, f.j, false}};
  }
  return {CellRef{f.i, f.j - 1, f.j == 0}, CellRef{f.i, f.j, f.j == nx2_}};
}

Mesh build_mesh(int nx1, int nx2, Bounds bounds) { return Mesh(nx1, nx2, bounds); }

Mesh build_mesh_for_width(int nx1, Bounds bounds) {
  const double ratio = bounds.length2() / bounds.length1() * nx1;
  const int nx2 = static_cast<int>(std::lround(ratio));
  if (std::abs(ratio - nx2) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("nx1=" + std::to_string(nx1) +
                                " does not give square cells on these bounds");
  }
  return Mesh(nx1, nx2, bounds);
}

}  // namespace mhdmc
