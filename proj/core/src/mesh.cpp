#include "c0ip/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "c0ip/error.hpp"

namespace c0ip {

namespace {

using Mat = std::array<std::array<double, kMaxDim>, kMaxDim>;

double det(const Mat& a, int d) {
  if (d == 1) return a[0][0];
  if (d == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// Column k of the edge matrix is v_{k+1} - v_0.
Mat edge_matrix(const Mesh& mesh, int c) {
  Mat e{};
  const auto& cell = mesh.cells[c];
  const Point& v0 = mesh.vertices[cell[0]];
  for (int k = 0; k < mesh.dim; ++k) {
    const Point& vk = mesh.vertices[cell[k + 1]];
    for (int i = 0; i < mesh.dim; ++i) e[i][k] = vk[i] - v0[i];
  }
  return e;
}

double signed_volume(const Mesh& mesh, int c) {
  return det(edge_matrix(mesh, c), mesh.dim) / factorial(mesh.dim);
}

void check_n(int n) {
  if (n < 1) throw ConfigError("mesh subdivision count must be >= 1");
}

// Appends the two triangles of the subsquare with lower-left vertex v00.
void split_square(Mesh& mesh, int v00, int v10, int v01, int v11) {
  mesh.cells.push_back({v00, v10, v11, 0});
  mesh.cells.push_back({v00, v11, v01, 0});
}

}  // namespace

double Mesh::cell_volume(int c) const { return std::abs(signed_volume(*this, c)); }

double Mesh::cell_diameter(int c) const {
  double best = 0.0;
  const auto& cell = cells[c];
  for (int a = 0; a <= dim; ++a) {
    for (int b = a + 1; b <= dim; ++b) {
      double s = 0.0;
      for (int i = 0; i < dim; ++i) {
        const double t = vertices[cell[a]][i] - vertices[cell[b]][i];
        s += t * t;
      }
      best = std::max(best, s);
    }
  }
  return std::sqrt(best);
}

double Mesh::total_volume() const {
  double v = 0.0;
  for (int c = 0; c < num_cells(); ++c) v += cell_volume(c);
  return v;
}

void finalize_mesh(Mesh& mesh) {
  mesh.h_global = 0.0;
  mesh.h_min = mesh.cells.empty() ? 0.0 : INFINITY;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (signed_volume(mesh, c) < 0.0) std::swap(mesh.cells[c][0], mesh.cells[c][1]);
    const double hk = mesh.cell_diameter(c);
    mesh.h_global = std::max(mesh.h_global, hk);
    mesh.h_min = std::min(mesh.h_min, hk);
  }
}

Mesh build_unit_interval_mesh(int n) {
  check_n(n);
  Mesh mesh;
  mesh.dim = 1;
  for (int i = 0; i <= n; ++i) mesh.vertices.push_back({static_cast<double>(i) / n, 0.0, 0.0});
  for (int i = 0; i < n; ++i) mesh.cells.push_back({i, i + 1, 0, 0});
  finalize_mesh(mesh);
  return mesh;
}

Mesh build_unit_square_mesh(int n) {
  check_n(n);
  Mesh mesh;
  mesh.dim = 2;
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n, 0.0});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) split_square(mesh, id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
  finalize_mesh(mesh);
  return mesh;
}

Mesh build_lshape_mesh(int n) {
  check_n(n);
  Mesh mesh;
  mesh.dim = 2;
  const int side = 2 * n + 1;
  // Grid over [-1,1]^2; subsquares with x >= 0 and y <= 0 are removed.
  auto inside = [n](int i, int j) { return !(i >= n && j < n); };
  std::vector<int> remap(side * side, -1);
  auto vertex = [&](int i, int j) {
    int& slot = remap[j * side + i];
    if (slot < 0) {
      slot = mesh.num_vertices();
      mesh.vertices.push_back({-1.0 + static_cast<double>(i) / n, -1.0 + static_cast<double>(j) / n, 0.0});
    }
    return slot;
  };
  // Create vertices row by row so numbering is deterministic.
  for (int j = 0; j < side; ++j)
    for (int i = 0; i < side; ++i) {
      bool used = false;
      for (int dj = -1; dj <= 0; ++dj)
        for (int di = -1; di <= 0; ++di) {
          const int ci = i + di, cj = j + dj;
          if (ci >= 0 && cj >= 0 && ci < 2 * n && cj < 2 * n && inside(ci, cj)) used = true;
        }
      if (used) vertex(i, j);
    }
  for (int j = 0; j < 2 * n; ++j)
    for (int i = 0; i < 2 * n; ++i)
      if (inside(i, j)) split_square(mesh, vertex(i, j), vertex(i + 1, j), vertex(i, j + 1), vertex(i + 1, j + 1));
  finalize_mesh(mesh);
  return mesh;
}

Mesh build_unit_cube_mesh(int n) {
  check_n(n);
  Mesh mesh;
  mesh.dim = 3;
  const int s = n + 1;
  auto id = [s](int i, int j, int k) { return (k * s + j) * s + i; };
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n, static_cast<double>(k) / n});
  std::array<int, 3> perm{0, 1, 2};
  std::vector<std::array<int, 3>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : perms) {
          // Monotone path from (0,0,0) to (1,1,1) through the subcube.
          std::array<int, 3> off{0, 0, 0};
          std::array<int, kMaxDim + 1> cell{};
          cell[0] = id(i, j, k);
          for (int step = 0; step < 3; ++step) {
            off[p[step]] = 1;
            cell[step + 1] = id(i + off[0], j + off[1], k + off[2]);
          }
          mesh.cells.push_back(cell);
        }
  finalize_mesh(mesh);
  return mesh;
}

AffineMap affine_map(const Mesh& mesh, int cell) {
  AffineMap m;
  const int d = mesh.dim;
  m.dim = d;
  m.J = edge_matrix(mesh, cell);
  m.b = mesh.vertices[mesh.cells[cell][0]];
  m.detJ = det(m.J, d);
  double scale = 1.0;
  for (int k = 0; k < d; ++k) {
    double col = 0.0;
    for (int i = 0; i < d; ++i) col += m.J[i][k] * m.J[i][k];
    scale *= std::sqrt(col);
  }
  if (!(std::abs(m.detJ) > 1e-14 * scale)) throw StructuralError("degenerate cell " + std::to_string(cell));
  // Inverse transpose through cofactors: (J^-1)^T = cof(J) / det(J).
  Mat cof{};
  if (d == 1) {
    cof[0][0] = 1.0;
  } else if (d == 2) {
    cof[0][0] = m.J[1][1];
    cof[0][1] = -m.J[1][0];
    cof[1][0] = -m.J[0][1];
    cof[1][1] = m.J[0][0];
  } else {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
        cof[i][j] = m.J[i1][j1] * m.J[i2][j2] - m.J[i1][j2] * m.J[i2][j1];
      }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m.inv_transpose[i][j] = cof[i][j] / m.detJ;
  return m;
}

Point AffineMap::map(const Point& xi) const {
  Point x = b;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) x[i] += J[i][j] * xi[j];
  return x;
}

Point AffineMap::inverse_map(const Point& x) const {
  // xi = J^-1 (x - b), and J^-1 = (inv_transpose)^T.
  Point xi{};
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) xi[j] += inv_transpose[i][j] * (x[i] - b[i]);
  return xi;
}

FaceTable build_face_table(const Mesh& mesh) {
  const int d = mesh.dim;
  FaceTable table;
  table.cell_faces.assign(mesh.num_cells(), {-1, -1, -1, -1});

  struct Incidence {
    int cell;
    int local;
  };
  std::map<std::array<int, kMaxDim>, std::vector<Incidence>> incidences;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int k = 0; k <= d; ++k) {
      std::array<int, kMaxDim> key{-1, -1, -1};
      int pos = 0;
      for (int v = 0; v <= d; ++v)
        if (v != k) key[pos++] = mesh.cells[c][v];
      std::sort(key.begin(), key.begin() + d);
      incidences[key].push_back({c, k});
    }
  }

  table.faces.reserve(incidences.size());
  for (const auto& [key, inc] : incidences) {
    if (inc.size() > 2) {
      std::ostringstream msg;
      msg << "non-conforming mesh: face shared by " << inc.size() << " cells";
      throw StructuralError(msg.str());
    }
    Face f;
    f.vertices = key;
    f.left_cell = inc[0].cell;
    f.left_local = inc[0].local;
    if (inc.size() == 2) {
      f.right_cell = inc[1].cell;
      f.right_local = inc[1].local;
    }
    const Point& p0 = mesh.vertices[key[0]];
    const Point& opp = mesh.vertices[mesh.cells[f.left_cell][f.left_local]];
    Point nrm{};
    if (d == 1) {
      nrm[0] = 1.0;
      f.measure = 1.0;
    } else if (d == 2) {
      const Point& p1 = mesh.vertices[key[1]];
      const double tx = p1[0] - p0[0], ty = p1[1] - p0[1];
      f.measure = std::hypot(tx, ty);
      nrm = {ty / f.measure, -tx / f.measure, 0.0};
    } else {
      const Point& p1 = mesh.vertices[key[1]];
      const Point& p2 = mesh.vertices[key[2]];
      const double a[3] = {p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]};
      const double b[3] = {p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]};
      const double cr[3] = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
      const double len = std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
      f.measure = 0.5 * len;
      nrm = {cr[0] / len, cr[1] / len, cr[2] / len};
    }
    double side = 0.0;
    for (int i = 0; i < d; ++i) side += (opp[i] - p0[i]) * nrm[i];
    if (side > 0.0)
      for (int i = 0; i < d; ++i) nrm[i] = -nrm[i];
    f.normal = nrm;

    const int id = table.size();
    table.cell_faces[f.left_cell][f.left_local] = id;
    if (f.is_boundary()) {
      ++table.boundary_count;
    } else {
      ++table.interior_count;
      table.cell_faces[f.right_cell][f.right_local] = id;
    }
    table.faces.push_back(f);
  }
  return table;
}

Point face_point(const Mesh& mesh, const Face& face, const Point& ref) {
  const int d = mesh.dim;
  Point x = mesh.vertices[face.vertices[0]];
  for (int k = 1; k < d; ++k) {
    const Point& vk = mesh.vertices[face.vertices[k]];
    for (int i = 0; i < d; ++i) x[i] += ref[k - 1] * (vk[i] - mesh.vertices[face.vertices[0]][i]);
  }
  return x;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os.precision(17);
  os << mesh.dim << ' ' << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  for (const auto& v : mesh.vertices) {
    for (int i = 0; i < mesh.dim; ++i) os << (i ? " " : "") << v[i];
    os << '\n';
  }
  for (const auto& c : mesh.cells) {
    for (int i = 0; i <= mesh.dim; ++i) os << (i ? " " : "") << c[i];
    os << '\n';
  }
}

Mesh read_mesh(std::istream& is) {
  Mesh mesh;
  int nv = 0, nc = 0;
  if (!(is >> mesh.dim >> nv >> nc)) throw StructuralError("mesh file: bad header");
  if (mesh.dim < 1 || mesh.dim > kMaxDim || nv < 0 || nc < 0) throw StructuralError("mesh file: bad header values");
  mesh.vertices.assign(nv, Point{});
  for (auto& v : mesh.vertices)
    for (int i = 0; i < mesh.dim; ++i)
      if (!(is >> v[i])) throw StructuralError("mesh file: truncated vertex list");
  mesh.cells.assign(nc, {0, 0, 0, 0});
  for (auto& c : mesh.cells)
    for (int i = 0; i <= mesh.dim; ++i) {
      if (!(is >> c[i])) throw StructuralError("mesh file: truncated cell list");
      if (c[i] < 0 || c[i] >= nv) throw StructuralError("mesh file: vertex index out of range");
    }
  finalize_mesh(mesh);
  return mesh;
}

}  // namespace c0ip
