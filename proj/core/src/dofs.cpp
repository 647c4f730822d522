#include "c0ip/dofs.hpp"

#include <algorithm>
#include <map>

namespace c0ip {

int DofMap::num_boundary() const { return static_cast<int>(std::count(boundary.begin(), boundary.end(), 1)); }

DofMap build_dof_map(const Mesh& mesh, const FaceTable& faces, const ReferenceBasis& basis) {
  DofMap map;
  map.degree = basis.degree();
  map.dofs_per_cell = basis.size();
  map.cell_dofs.resize(static_cast<size_t>(mesh.num_cells()) * basis.size());

  // Key: (global vertex, barycentric weight) pairs for the nonzero weights, sorted.
  using Key = std::array<std::pair<int, int>, kMaxDim + 1>;
  std::map<Key, int> ids;
  const int nv = mesh.dim + 1;

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int k = 0; k < basis.size(); ++k) {
      const auto& beta = basis.node_barycentric(k);
      Key key;
      key.fill({-1, 0});
      int used = 0;
      for (int i = 0; i < nv; ++i)
        if (beta[i] > 0) key[used++] = {cell[i], beta[i]};
      std::sort(key.begin(), key.begin() + used);
      auto [it, inserted] = ids.try_emplace(key, map.num_dofs);
      if (inserted) {
        ++map.num_dofs;
        Point p{};
        for (int i = 0; i < nv; ++i)
          for (int j = 0; j < mesh.dim; ++j) p[j] += beta[i] * mesh.vertices[cell[i]][j];
        for (int j = 0; j < mesh.dim; ++j) p[j] /= basis.degree();
        map.points.push_back(p);
        map.boundary.push_back(0);
      }
      const int id = it->second;
      map.cell_dofs[static_cast<size_t>(c) * basis.size() + k] = id;
      // The node lies on the face opposite any local vertex with zero weight.
      for (int i = 0; i < nv; ++i)
        if (beta[i] == 0 && faces.faces[faces.cell_faces[c][i]].is_boundary()) map.boundary[id] = 1;
    }
  }
  return map;
}

}  // namespace c0ip
