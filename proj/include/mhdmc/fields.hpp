#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "mhdmc/mesh.hpp"

namespace mhdmc {

/// Piecewise constant scalar on the primal cells (the space Q_h).
class CellField {
 public:
  CellField() = default;
  explicit CellField(const Mesh& mesh, double value = 0.0);
  CellField(const Mesh& mesh, std::vector<double> values);

  const Mesh& mesh() const { return mesh_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int i, int j) { return values_[mesh_.index(i, j)]; }
  double operator()(int i, int j) const { return values_[mesh_.index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  double min() const;
  double max() const;
  double max_abs() const;

  CellField& operator+=(const CellField& o);
  CellField& operator-=(const CellField& o);
  CellField& operator*=(double s);

 private:
  Mesh mesh_;
  std::vector<double> values_;
};

CellField operator+(CellField a, const CellField& b);
CellField operator-(CellField a, const CellField& b);
CellField operator*(double s, CellField a);
CellField hadamard(const CellField& a, const CellField& b);

/// Two-component cell field (Q_h^2).
struct CellVector {
  CellField c1;
  CellField c2;

  CellVector() = default;
  explicit CellVector(const Mesh& mesh, double v1 = 0.0, double v2 = 0.0)
      : c1(mesh, v1), c2(mesh, v2) {}
  CellVector(CellField a, CellField b) : c1(std::move(a)), c2(std::move(b)) {}

  const Mesh& mesh() const { return c1.mesh(); }
  std::size_t size() const { return c1.size(); }
  CellField& operator[](int comp) { return comp == 0 ? c1 : c2; }
  const CellField& operator[](int comp) const { return comp == 0 ? c1 : c2; }

  double max_abs() const;

  CellVector& operator+=(const CellVector& o);
  CellVector& operator-=(const CellVector& o);
  CellVector& operator*=(double s);
};

CellVector operator+(CellVector a, const CellVector& b);
CellVector operator-(CellVector a, const CellVector& b);
CellVector operator*(double s, CellVector a);

/// Piecewise constant on the direction-i dual grid (the space W_h^(i)); one value per
/// face of E^i, indexed like Mesh::face_id.
class FaceField {
 public:
  FaceField() = default;
  FaceField(const Mesh& mesh, int direction, double value = 0.0);

  const Mesh& mesh() const { return mesh_; }
  int direction() const { return direction_; }
  std::size_t size() const { return values_.size(); }

  double& at(int i, int j) { return values_[static_cast<std::size_t>(j) * mesh_.nx1() + i]; }
  double at(int i, int j) const {
    return values_[static_cast<std::size_t>(j) * mesh_.nx1() + i];
  }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

 private:
  Mesh mesh_;
  int direction_ = 1;
  std::vector<double> values_;
};

/// Face-gradient of a scalar: (d_E^(1) f, d_E^(2) f).
using FaceGradient = std::array<FaceField, 2>;

}  // namespace mhdmc
