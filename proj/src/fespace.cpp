#include "semimg/fespace.hpp"

#include "semimg/error.hpp"

#include <algorithm>
#include <string>

namespace semimg {

FESpace build_fespace(Mesh mesh) { return build_fespace(std::make_shared<const Mesh>(std::move(mesh))); }

FESpace build_fespace(std::shared_ptr<const Mesh> mesh) {
  require(mesh != nullptr, ErrorCategory::invalid_argument, "build_fespace: null mesh");
  FESpace space;
  const int nv = mesh->num_vertices();
  space.vertex_to_free.assign(nv, -1);
  for (int v = 0; v < nv; ++v) {
    if (mesh->boundary_vertex[v]) {
      space.fixed_dofs.push_back(v);
    } else {
      space.vertex_to_free[v] = space.num_free();
      space.free_dofs.push_back(v);
    }
  }

  space.vertex_cell_offsets.assign(nv + 1, 0);
  for (const Cell& c : mesh->cells)
    for (const int v : c) ++space.vertex_cell_offsets[v + 1];
  for (int v = 0; v < nv; ++v) space.vertex_cell_offsets[v + 1] += space.vertex_cell_offsets[v];
  space.vertex_cells.resize(space.vertex_cell_offsets.back());
  space.vertex_cell_slot.resize(space.vertex_cell_offsets.back());
  std::vector<int> next(space.vertex_cell_offsets.begin(), space.vertex_cell_offsets.end() - 1);
  for (int c = 0; c < mesh->num_cells(); ++c) {
    for (int k = 0; k < 3; ++k) {
      const int v = mesh->cells[c][k];
      space.vertex_cells[next[v]] = c;
      space.vertex_cell_slot[next[v]] = k;
      ++next[v];
    }
  }

  space.pattern_offsets.assign(space.num_free() + 1, 0);
  std::vector<int> cols;
  for (int i = 0; i < space.num_free(); ++i) {
    const int v = space.free_dofs[i];
    cols.clear();
    for (int p = space.vertex_cell_offsets[v]; p < space.vertex_cell_offsets[v + 1]; ++p) {
      for (const int w : mesh->cells[space.vertex_cells[p]]) {
        if (space.vertex_to_free[w] >= 0) cols.push_back(space.vertex_to_free[w]);
      }
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    space.pattern_cols.insert(space.pattern_cols.end(), cols.begin(), cols.end());
    space.pattern_offsets[i + 1] = static_cast<int>(space.pattern_cols.size());
  }

  space.mesh = std::move(mesh);
  return space;
}

Vector interpolate(const FESpace& space, const ScalarField& u) {
  Vector values(space.num_free());
  for (int i = 0; i < space.num_free(); ++i) {
    const Point& p = space.dof_point(i);
    values[i] = u(p[0], p[1]);
  }
  return values;
}

Vector expand(const FESpace& space, std::span<const double> u) {
  require(static_cast<int>(u.size()) == space.num_free(), ErrorCategory::invalid_argument,
          "expand: vector size does not match space");
  Vector full(space.num_vertices(), 0.0);
  for (int i = 0; i < space.num_free(); ++i) full[space.free_dofs[i]] = u[i];
  return full;
}

CsrMatrix prolongation(const FESpace& coarse, const FESpace& fine) {
  const Mesh& fm = *fine.mesh;
  require(fm.has_genealogy(), ErrorCategory::precondition, "prolongation: fine mesh has no vertex genealogy");
  std::vector<Triplet> triplets;
  triplets.reserve(fine.num_free() * 2);
  for (int i = 0; i < fine.num_free(); ++i) {
    const VertexOrigin& origin = fm.vertex_origin[fine.free_dofs[i]];
    require(origin.a >= 0 && origin.a < coarse.num_vertices() && origin.b < coarse.num_vertices(),
            ErrorCategory::precondition, "prolongation: genealogy does not refer to the coarse mesh");
    if (origin.inherited()) {
      const int j = coarse.vertex_to_free[origin.a];
      if (j >= 0) triplets.push_back({i, j, 1.0});
    } else {
      for (const int parent : {origin.a, origin.b}) {
        const int j = coarse.vertex_to_free[parent];
        if (j >= 0) triplets.push_back({i, j, 0.5});
      }
    }
  }
  return from_triplets(fine.num_free(), coarse.num_free(), std::move(triplets));
}

}  // namespace semimg
