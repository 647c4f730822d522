#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "c0ip/multi_index.hpp"

namespace c0ip {

using Point = std::array<double, kMaxDim>;

/**
 * Conforming simplicial mesh in 1, 2 or 3 dimensions.
 *
 * Cells store d+1 vertex indices ordered so that the signed volume is
 * positive. Unused trailing coordinates of a Point are zero.
 */
struct Mesh {
  int dim = 0;
  std::vector<Point> vertices;
  std::vector<std::array<int, kMaxDim + 1>> cells;
  double h_global = 0.0;  ///< max cell diameter
  double h_min = 0.0;     ///< min cell diameter

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int vertices_per_cell() const { return dim + 1; }

  double cell_volume(int c) const;
  double cell_diameter(int c) const;
  double total_volume() const;
};

inline constexpr int kNoCell = -1;

struct Face {
  std::array<int, kMaxDim> vertices{};  ///< sorted ascending, dim entries used
  int left_cell = kNoCell;
  int right_cell = kNoCell;  ///< kNoCell on the domain boundary
  int left_local = -1;       ///< local index of the left cell vertex opposite the face
  int right_local = -1;
  Point normal{};  ///< unit, outward from left_cell
  double measure = 0.0;

  bool is_boundary() const { return right_cell == kNoCell; }
};

struct FaceTable {
  std::vector<Face> faces;
  int interior_count = 0;
  int boundary_count = 0;
  /// cell_faces[c][k] is the face opposite local vertex k of cell c.
  std::vector<std::array<int, kMaxDim + 1>> cell_faces;

  int size() const { return static_cast<int>(faces.size()); }
};

/// x = J * xi + b, mapping the reference simplex onto a cell.
struct AffineMap {
  int dim = 0;
  std::array<std::array<double, kMaxDim>, kMaxDim> J{};
  Point b{};
  double detJ = 0.0;
  std::array<std::array<double, kMaxDim>, kMaxDim> inv_transpose{};

  Point map(const Point& xi) const;
  Point inverse_map(const Point& x) const;
};

Mesh build_unit_interval_mesh(int n);
/// Unit square, each subsquare split along the lower-left to upper-right diagonal.
Mesh build_unit_square_mesh(int n);
/// (-1,1)^2 minus [0,1)x(-1,0], assembled from three unit squares.
Mesh build_lshape_mesh(int n);
/// Unit cube, Kuhn split of each subcube into 6 tetrahedra.
Mesh build_unit_cube_mesh(int n);

/// Throws StructuralError when a face has more than two incident cells.
FaceTable build_face_table(const Mesh& mesh);

/// Throws StructuralError on a degenerate cell.
AffineMap affine_map(const Mesh& mesh, int cell);

/// Map reference (d-1)-simplex coordinates onto a physical face.
Point face_point(const Mesh& mesh, const Face& face, const Point& ref);

/// Plain-text mesh format: "d nv nc", then nv lines of d coordinates,
/// then nc lines of d+1 zero-based vertex indices.
void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);

/// Recompute h_global/h_min and flip any negatively oriented cell.
void finalize_mesh(Mesh& mesh);

}  // namespace c0ip
