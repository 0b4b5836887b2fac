#pragma once

#include "semimg/mesh.hpp"
#include "semimg/sparse.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace semimg {

using ScalarField = std::function<double(double x, double y)>;
using GradientField = std::function<Point(double x, double y)>;

/// Continuous P1 space on a mesh with homogeneous Dirichlet boundary values.
///
/// Free dofs are the interior vertices in ascending vertex id. Nodal vectors
/// are plain `Vector`s indexed by free dof; boundary values are implicitly 0.
struct FESpace {
  std::shared_ptr<const Mesh> mesh;
  std::vector<int> free_dofs;
  std::vector<int> fixed_dofs;
  /// Free-dof index of every vertex, -1 for fixed vertices.
  std::vector<int> vertex_to_free;

  /// Cells incident to every vertex, ascending cell id, with the local
  /// position of the vertex in the cell.
  std::vector<int> vertex_cell_offsets;
  std::vector<int> vertex_cells;
  std::vector<int> vertex_cell_slot;

  /// Sparsity of free-free couplings (dofs sharing a cell), diagonal included.
  std::vector<int> pattern_offsets;
  std::vector<int> pattern_cols;

  int num_free() const { return static_cast<int>(free_dofs.size()); }
  int num_vertices() const { return mesh->num_vertices(); }
  const Point& dof_point(int i) const { return mesh->vertices[free_dofs[i]]; }
};

FESpace build_fespace(std::shared_ptr<const Mesh> mesh);
FESpace build_fespace(Mesh mesh);

/// Nodal values of u at the free dofs.
Vector interpolate(const FESpace& space, const ScalarField& u);

/// Vertex values of a nodal vector, zero on the boundary.
Vector expand(const FESpace& space, std::span<const double> u);

/// Matrix of the inclusion of the coarse space in the fine one, built from
/// the fine mesh genealogy: rows are fine free dofs, columns coarse free dofs.
CsrMatrix prolongation(const FESpace& coarse, const FESpace& fine);

}  // namespace semimg
