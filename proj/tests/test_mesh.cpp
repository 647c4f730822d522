#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "c0ip/error.hpp"
#include "c0ip/mesh.hpp"

using namespace c0ip;

namespace {

int count_interior_points_on_normals(const FaceTable& t, int sign) {
  int n = 0;
  for (const auto& f : t.faces)
    if (!f.is_boundary() && f.normal[0] == sign) ++n;
  return n;
}

}  // namespace

TEST_CASE("unit interval mesh") {
  const Mesh m4 = build_unit_interval_mesh(4);
  CHECK(m4.num_cells() == 4);
  CHECK(m4.num_vertices() == 5);
  const FaceTable t4 = build_face_table(m4);
  CHECK(t4.interior_count == 3);
  CHECK(t4.boundary_count == 2);
  // Left-to-right orientation: every interior point normal is +1.
  CHECK(count_interior_points_on_normals(t4, 1) == 3);

  const Mesh m1 = build_unit_interval_mesh(1);
  CHECK(m1.num_cells() == 1);
  CHECK(build_face_table(m1).interior_count == 0);

  CHECK(build_unit_interval_mesh(8).h_global == doctest::Approx(0.125).epsilon(1e-15));
  CHECK_THROWS_AS(build_unit_interval_mesh(0), ConfigError);
}

TEST_CASE("unit square mesh") {
  const Mesh m1 = build_unit_square_mesh(1);
  CHECK(m1.num_cells() == 2);
  const FaceTable t1 = build_face_table(m1);
  CHECK(t1.boundary_count == 4);
  CHECK(t1.interior_count == 1);

  const Mesh m8 = build_unit_square_mesh(8);
  CHECK(m8.num_cells() == 128);
  CHECK(m8.h_global == doctest::Approx(std::sqrt(2.0) / 8).epsilon(1e-14));

  // Euler characteristic of a disc: V - E + F = 1.
  const Mesh m4 = build_unit_square_mesh(4);
  const FaceTable t4 = build_face_table(m4);
  CHECK(m4.num_vertices() - t4.size() + m4.num_cells() == 1);
}

TEST_CASE("L-shape mesh") {
  const Mesh m1 = build_lshape_mesh(1);
  CHECK(m1.num_cells() == 6);
  CHECK(m1.num_vertices() == 8);
  CHECK(build_face_table(m1).boundary_count == 8);

  const Mesh m2 = build_lshape_mesh(2);
  CHECK(m2.num_cells() == 24);
  bool origin = false;
  for (const auto& v : m2.vertices) origin |= (v[0] == 0.0 && v[1] == 0.0);
  CHECK(origin);
  // No cell covers the removed quadrant.
  for (int c = 0; c < m2.num_cells(); ++c) {
    double cx = 0.0, cy = 0.0;
    for (int k = 0; k < 3; ++k) {
      cx += m2.vertices[m2.cells[c][k]][0] / 3.0;
      cy += m2.vertices[m2.cells[c][k]][1] / 3.0;
    }
    CHECK_FALSE((cx > 0.0 && cy < 0.0));
  }
}

TEST_CASE("unit cube mesh") {
  const Mesh m1 = build_unit_cube_mesh(1);
  CHECK(m1.num_cells() == 6);
  CHECK(std::abs(m1.total_volume() - 1.0) < 1e-14);
  CHECK(build_face_table(m1).boundary_count == 12);

  const Mesh m2 = build_unit_cube_mesh(2);
  CHECK(m2.num_cells() == 48);
  CHECK(m2.num_vertices() == 27);
  const FaceTable t2 = build_face_table(m2);
  for (const auto& f : t2.faces) {
    if (f.is_boundary()) continue;
    CHECK(f.right_cell != f.left_cell);
  }
  // Each boundary square of the cube (4 per side, 6 sides) is split in two.
  CHECK(t2.boundary_count == 48);
  // 4 faces per tet, interior counted twice.
  CHECK(2 * t2.interior_count + t2.boundary_count == 4 * m2.num_cells());
}

TEST_CASE("generator invariants") {
  for (int n : {1, 2, 4, 8}) {
    const Mesh meshes[] = {build_unit_interval_mesh(n), build_unit_square_mesh(n), build_lshape_mesh(n),
                           build_unit_cube_mesh(n)};
    const double measure[] = {1.0, 1.0, 3.0, 1.0};
    for (int i = 0; i < 4; ++i) {
      const Mesh& m = meshes[i];
      CAPTURE(n);
      CAPTURE(i);
      CHECK(std::abs(m.total_volume() - measure[i]) < 1e-12);
      CHECK(m.h_global / m.h_min <= 4.0);
      for (int c = 0; c < m.num_cells(); ++c) CHECK(affine_map(m, c).detJ > 0.0);

      const FaceTable t = build_face_table(m);
      // Every local face appears exactly once, with this cell on one side.
      for (int c = 0; c < m.num_cells(); ++c)
        for (int k = 0; k <= m.dim; ++k) {
          const Face& f = t.faces[t.cell_faces[c][k]];
          CHECK(((f.left_cell == c && f.left_local == k) || (f.right_cell == c && f.right_local == k)));
        }
      // Closure: sum over faces of measure * outward normal vanishes per cell.
      for (int c = 0; c < m.num_cells(); ++c) {
        Point s{};
        for (int k = 0; k <= m.dim; ++k) {
          const Face& f = t.faces[t.cell_faces[c][k]];
          const double sign = (f.left_cell == c) ? 1.0 : -1.0;
          for (int j = 0; j < m.dim; ++j) s[j] += sign * f.measure * f.normal[j];
        }
        for (int j = 0; j < m.dim; ++j) CHECK(std::abs(s[j]) < 1e-13);
      }
      // Normals are unit and the right cell sees -normal as its outward normal.
      for (const auto& f : t.faces) {
        double len = 0.0;
        for (int j = 0; j < m.dim; ++j) len += f.normal[j] * f.normal[j];
        CHECK(std::abs(len - 1.0) < 1e-13);
        if (f.is_boundary()) continue;
        const Point& p0 = m.vertices[f.vertices[0]];
        const Point& opp = m.vertices[m.cells[f.right_cell][f.right_local]];
        double side = 0.0;
        for (int j = 0; j < m.dim; ++j) side += (opp[j] - p0[j]) * f.normal[j];
        CHECK(side > 0.0);
      }
      // Deterministic ordering: sorted by vertex tuples.
      for (int k = 1; k < t.size(); ++k) CHECK(t.faces[k - 1].vertices < t.faces[k].vertices);
    }
  }
}

TEST_CASE("affine map") {
  Mesh ref;
  ref.dim = 2;
  ref.vertices = {Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}};
  ref.cells = {{0, 1, 2, 0}};
  finalize_mesh(ref);
  AffineMap a = affine_map(ref, 0);
  CHECK(a.J[0][0] == 1.0);
  CHECK(a.J[1][1] == 1.0);
  CHECK(a.J[0][1] == 0.0);
  CHECK(a.J[1][0] == 0.0);

  Mesh scaled = ref;
  for (auto& v : scaled.vertices)
    for (double& x : v) x *= 2.0;
  a = affine_map(scaled, 0);
  CHECK(a.detJ == doctest::Approx(4.0));
  CHECK(a.detJ == doctest::Approx(2.0 * scaled.cell_volume(0)));

  Mesh line;
  line.dim = 1;
  line.vertices = {Point{0, 0, 0}, Point{0.25, 0, 0}};
  line.cells = {{0, 1, 0, 0}};
  finalize_mesh(line);
  a = affine_map(line, 0);
  CHECK(a.J[0][0] == 0.25);
  CHECK(a.detJ == 0.25);

  Mesh flat = ref;
  flat.vertices[2] = Point{2, 0, 0};
  CHECK_THROWS_AS(affine_map(flat, 0), StructuralError);

  // J^-T J^T = I on every Kuhn tetrahedron.
  const Mesh cube = build_unit_cube_mesh(2);
  for (int c = 0; c < cube.num_cells(); ++c) {
    const AffineMap m = affine_map(cube, c);
    CHECK(m.detJ == doctest::Approx(6.0 * cube.cell_volume(c)));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += m.inv_transpose[i][k] * m.J[j][k];
        CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-13);
      }
    const Point xi{0.2, 0.3, 0.1};
    const Point back = m.inverse_map(m.map(xi));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(back[i] - xi[i]) < 1e-14);
  }
}

TEST_CASE("non-conforming input is rejected") {
  Mesh m;
  m.dim = 2;
  m.vertices = {Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}, Point{0, -1, 0}, Point{1, 1, 0}};
  // Three triangles sharing the edge (0,1).
  m.cells = {{0, 1, 2, 0}, {0, 1, 3, 0}, {0, 1, 4, 0}};
  finalize_mesh(m);
  CHECK_THROWS_AS(build_face_table(m), StructuralError);
}

TEST_CASE("ASCII mesh round trip") {
  const Mesh m = build_lshape_mesh(2);
  std::stringstream ss;
  write_mesh(ss, m);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "2 21 24");
  ss.seekg(0);
  const Mesh back = read_mesh(ss);
  CHECK(back.dim == 2);
  CHECK(back.cells == m.cells);
  CHECK(back.vertices == m.vertices);
  CHECK(back.h_global == m.h_global);

  std::stringstream bad("2 3 1\n0 0\n1 0\n0 1\n0 1 7\n");
  CHECK_THROWS_AS(read_mesh(bad), StructuralError);
}
