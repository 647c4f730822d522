#pragma once

#include <vector>

#include "c0ip/mesh.hpp"
#include "c0ip/refbasis.hpp"

namespace c0ip {

/**
 * Continuous P_r degrees of freedom. Lattice nodes are identified across
 * cells by their barycentric coordinates with respect to global vertices, so
 * neighbouring cells share every node on a common face, edge or vertex.
 */
struct DofMap {
  int degree = 0;
  int num_dofs = 0;
  int dofs_per_cell = 0;
  std::vector<int> cell_dofs;  ///< cell c, local k at c * dofs_per_cell + k
  std::vector<Point> points;   ///< physical node positions
  std::vector<char> boundary;  ///< node lies on the domain boundary

  const int* dofs(int cell) const { return cell_dofs.data() + static_cast<size_t>(cell) * dofs_per_cell; }
  int num_boundary() const;
};

DofMap build_dof_map(const Mesh& mesh, const FaceTable& faces, const ReferenceBasis& basis);

}  // namespace c0ip
