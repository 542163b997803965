#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace mhdmc {

/// Rectangle [x1a, x1b] x [x2a, x2b]; x1 is periodic, x2 is bounded by walls.
struct Bounds {
  double x1a = 0.0;
  double x1b = 1.0;
  double x2a = 0.0;
  double x2b = 1.0;

  double length1() const { return x1b - x1a; }
  double length2() const { return x2b - x2a; }
  bool operator==(const Bounds&) const = default;
};

enum class FaceKind { Interior, Exterior };

enum class Wall { Bottom, Top };

/// Reference to a cell or to the ghost layer beyond an x2 wall.
struct CellRef {
  int i = 0;
  int j = 0;
  bool ghost = false;

  bool operator==(const CellRef&) const = default;
};

struct Neighbors {
  CellRef west, east, south, north;
};

/// A face of the primal mesh. Direction-1 faces are vertical (normal e1), located at
/// x1 = x1a + i*h and separate cells (i-1 mod nx1, j) and (i, j). Direction-2 faces are
/// horizontal (normal e2), located at x2 = x2a + j*h and separate (i, j-1) and (i, j);
/// rows j = 0 and j = nx2 lie on the walls.
struct FaceIndex {
  int direction = 1;
  int i = 0;
  int j = 0;
  FaceKind kind = FaceKind::Interior;

  bool operator==(const FaceIndex&) const = default;
};

/// Uniform square-cell mesh over a strip periodic in x1 with walls in x2.
/// Cells are stored row-major: index = j * nx1 + i.
class Mesh {
 public:
  Mesh() = default;
  Mesh(int nx1, int nx2, Bounds bounds);

  int nx1() const { return nx1_; }
  int nx2() const { return nx2_; }
  double h() const { return h_; }
  const Bounds& bounds() const { return bounds_; }
  std::array<bool, 2> periodic() const { return {true, false}; }

  std::size_t cell_count() const { return static_cast<std::size_t>(nx1_) * nx2_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx1_ + i; }
  int wrap1(int i) const { return ((i % nx1_) + nx1_) % nx1_; }

  std::array<double, 2> cell_center(int i, int j) const {
    return {bounds_.x1a + (i + 0.5) * h_, bounds_.x2a + (j + 0.5) * h_};
  }
  double cell_area() const { return h_ * h_; }
  double face_length() const { return h_; }
  double domain_area() const { return bounds_.length1() * bounds_.length2(); }

  Neighbors neighbors(int i, int j) const;

  /// Number of faces in E^direction (interior and exterior).
  std::size_t face_count(int direction) const;
  std::size_t face_id(const FaceIndex& f) const;
  FaceIndex face(int direction, std::size_t id) const;
  std::vector<FaceIndex> faces(int direction) const;
  std::size_t interior_face_count() const;
  std::size_t exterior_face_count() const { return 2 * static_cast<std::size_t>(nx1_); }

  /// |D_sigma|: h^2 for interior faces, h^2/2 on the walls.
  double dual_area(const FaceIndex& f) const {
    return f.kind == FaceKind::Interior ? h_ * h_ : 0.5 * h_ * h_;
  }
  std::array<double, 2> face_center(const FaceIndex& f) const;

  /// The two cells adjacent to an interior face, ordered along +e_direction.
  std::array<CellRef, 2> face_cells(const FaceIndex& f) const;

  bool operator==(const Mesh& o) const {
    return nx1_ == o.nx1_ && nx2_ == o.nx2_ && bounds_ == o.bounds_;
  }

 private:
  int nx1_ = 0;
  int nx2_ = 0;
  double h_ = 0.0;
  Bounds bounds_{};
};

/// Validating constructor; throws std::invalid_argument for degenerate counts or
/// cells that are not square.
Mesh build_mesh(int nx1, int nx2, Bounds bounds);

/// Mesh with nx1 cells along x1 and as many rows as the square-cell constraint allows.
Mesh build_mesh_for_width(int nx1, Bounds bounds);

}  // namespace mhdmc
