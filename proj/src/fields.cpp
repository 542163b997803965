#include "mhdmc/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mhdmc {

CellField::CellField(const Mesh& mesh, double value)
    : mesh_(mesh), values_(mesh.cell_count(), value) {}

CellField::CellField(const Mesh& mesh, std::vector<double> values)
    : mesh_(mesh), values_(std::move(values)) {
  if (values_.size() != mesh.cell_count()) {
    throw std::invalid_argument("cell field size does not match mesh");
  }
}

double CellField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double CellField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double CellField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

CellField& CellField::operator+=(const CellField& o) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

CellField& CellField::operator-=(const CellField& o) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

CellField& CellField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

CellField operator+(CellField a, const CellField& b) { return a += b; }
CellField operator-(CellField a, const CellField& b) { return a -= b; }
CellField operator*(double s, CellField a) { return a *= s; }

CellField hadamard(const CellField& a, const CellField& b) {
  CellField out(a.mesh());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

double CellVector::max_abs() const { return std::max(c1.max_abs(), c2.max_abs()); }

CellVector& CellVector::operator+=(const CellVector& o) {
  c1 += o.c1;
  c2 += o.c2;
  return *this;
}

CellVector& CellVector::operator-=(const CellVector& o) {
  c1 -= o.c1;
  c2 -= o.c2;
  return *this;
}

CellVector& CellVector::operator*=(double s) {
  c1 *= s;
  c2 *= s;
  return *this;
}

CellVector operator+(CellVector a, const CellVector& b) { return a += b; }
CellVector operator-(CellVector a, const CellVector& b) { return a -= b; }
CellVector operator*(double s, CellVector a) { return a *= s; }

FaceField::FaceField(const Mesh& mesh, int direction, double value)
    : mesh_(mesh), direction_(direction), values_(mesh.face_count(direction), value) {}

}  // namespace mhdmc
