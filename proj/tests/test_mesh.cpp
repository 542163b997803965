#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

#include "mhdmc/mesh.hpp"

using namespace mhdmc;

namespace {

std::size_t count_kind(const Mesh& m, int dir, FaceKind kind) {
  std::size_t n = 0;
  for (const FaceIndex& f : m.faces(dir)) n += f.kind == kind;
  return n;
}

}  // namespace

TEST_CASE("2x2 grid on [-1,1]^2 counts") {
  const Mesh m = build_mesh(2, 2, Bounds{-1, 1, -1, 1});
  CHECK(m.h() == 1.0);
  CHECK(m.cell_count() == 4);
  CHECK(count_kind(m, 1, FaceKind::Interior) == 4);
  CHECK(count_kind(m, 1, FaceKind::Exterior) == 0);
  CHECK(count_kind(m, 2, FaceKind::Interior) == 2);
  CHECK(count_kind(m, 2, FaceKind::Exterior) == 4);
  CHECK(m.interior_face_count() == 6);
  CHECK(m.exterior_face_count() == 4);
}

TEST_CASE("mesh widths of the experiment domains") {
  const Mesh m = build_mesh(64, 64, Bounds{-1, 1, -1, 1});
  CHECK(m.h() == doctest::Approx(2.0 / 64).epsilon(1e-15));

  const Mesh kh = build_mesh(64, 32, Bounds{0, 2, -0.5, 0.5});
  CHECK(kh.h() == doctest::Approx(1.0 / 32).epsilon(1e-15));
  CHECK(build_mesh_for_width(64, Bounds{0, 2, -0.5, 0.5}).nx2() == 32);

  CHECK_THROWS_AS(build_mesh(32, 32, Bounds{0, 2, -0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh_for_width(3, Bounds{0, 2, -0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(1, 1, Bounds{0, 1, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(4, 4, Bounds{0, 0, 0, 1}), std::invalid_argument);
}

TEST_CASE("neighbors wrap in x1 and mark wall ghosts") {
  const Mesh m = build_mesh(4, 4, Bounds{0, 1, 0, 1});
  const Neighbors c = m.neighbors(0, 0);
  CHECK(c.west == CellRef{3, 0, false});
  CHECK(c.east == CellRef{1, 0, false});
  CHECK(c.south.ghost);
  CHECK_FALSE(c.north.ghost);

  const Neighbors in = m.neighbors(1, 2);
  CHECK(in.west == CellRef{0, 2, false});
  CHECK(in.east == CellRef{2, 2, false});
  CHECK(in.south == CellRef{1, 1, false});
  CHECK(in.north == CellRef{1, 3, false});

  const Neighbors top = m.neighbors(2, 3);
  CHECK(top.north.ghost);
  CHECK_FALSE(top.south.ghost);
  CHECK(m.neighbors(3, 1).east == CellRef{0, 1, false});
}

TEST_CASE("cell areas and dual cells tile the domain") {
  for (const Bounds b : {Bounds{-1, 1, -1, 1}, Bounds{0, 2, -0.5, 0.5}}) {
    const Mesh m = build_mesh_for_width(16, b);
    const double area = m.domain_area();
    CHECK(m.cell_count() * m.cell_area() == doctest::Approx(area).epsilon(1e-12));
    for (int dir : {1, 2}) {
      double sum = 0.0;
      for (const FaceIndex& f : m.faces(dir)) sum += m.dual_area(f);
      CHECK(sum == doctest::Approx(area).epsilon(1e-12));
    }
  }
}

TEST_CASE("every interior face is enumerated once and joins two distinct cells") {
  const Mesh m = build_mesh(5, 3, Bounds{0, 5, 0, 3});
  std::set<std::tuple<int, std::size_t, std::size_t>> pairs;
  std::size_t interior = 0;
  for (int dir : {1, 2}) {
    for (std::size_t id = 0; id < m.face_count(dir); ++id) {
      const FaceIndex f = m.face(dir, id);
      CHECK(m.face_id(f) == id);
      if (f.kind != FaceKind::Interior) continue;
      ++interior;
      const auto [k, l] = m.face_cells(f);
      REQUIRE_FALSE(k.ghost);
      REQUIRE_FALSE(l.ghost);
      const std::size_t a = m.index(k.i, k.j), c = m.index(l.i, l.j);
      CHECK(a != c);
      const auto [lo, hi] = std::minmax(a, c);
      CHECK(pairs.insert({dir, lo, hi}).second);
    }
  }
  CHECK(interior == m.interior_face_count());
}

TEST_CASE("wall faces touch one cell") {
  const Mesh m = build_mesh(4, 4, Bounds{0, 1, 0, 1});
  const auto bottom = m.face_cells(FaceIndex{2, 1, 0, FaceKind::Exterior});
  CHECK(bottom[0].ghost);
  CHECK_FALSE(bottom[1].ghost);
  const auto top = m.face_cells(FaceIndex{2, 1, 4, FaceKind::Exterior});
  CHECK_FALSE(top[0].ghost);
  CHECK(top[1].ghost);
  CHECK(m.dual_area(FaceIndex{2, 1, 4, FaceKind::Exterior}) == doctest::Approx(m.h() * m.h() / 2));
  CHECK(m.face_center(FaceIndex{2, 1, 4, FaceKind::Exterior})[1] == doctest::Approx(1.0));
  CHECK(m.cell_center(0, 0)[0] == doctest::Approx(0.125));
}
