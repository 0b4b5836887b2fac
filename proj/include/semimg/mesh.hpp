#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

namespace semimg {

using Point = std::array<double, 2>;
using Cell = std::array<int, 3>;

/// Where a vertex of a refined mesh came from, in terms of the previous mesh.
struct VertexOrigin {
  int a = -1;  ///< coarse vertex (inherited) or first edge endpoint
  int b = -1;  ///< second edge endpoint, -1 when inherited

  bool inherited() const { return b < 0; }
  static VertexOrigin from_vertex(int v) { return {v, -1}; }
  static VertexOrigin midpoint(int u, int v) { return {u < v ? u : v, u < v ? v : u}; }
  bool operator==(const VertexOrigin&) const = default;
};

/// Conforming triangulation of a 2D polygon.
///
/// Cells are counterclockwise. `cells[c][0]` is the newest vertex of cell c:
/// the edge opposite to it is the refinement edge used by bisect_refine.
/// Red refinement keeps this labelling (every child is similar to its parent
/// with matching vertex roles).
struct Mesh {
  std::vector<Point> vertices;
  std::vector<Cell> cells;
  std::vector<bool> boundary_vertex;
  /// Parent cell in the previous mesh; empty for generated meshes.
  std::vector<int> cell_parent;
  /// Origin of every vertex in the previous mesh; empty for generated meshes.
  std::vector<VertexOrigin> vertex_origin;
  int level = 0;
  double h_max = 0.0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  bool has_genealogy() const { return vertex_origin.size() == vertices.size(); }
};

/// Edge incidence of a mesh. Edges are stored with endpoints in ascending
/// order and numbered in order of first appearance (cell-major, local edge
/// k joins cells[c][k] and cells[c][(k+1)%3]).
struct EdgeTopology {
  std::vector<std::array<int, 2>> edges;
  /// Edge id of local edge k of every cell.
  std::vector<std::array<int, 3>> cell_edges;
  /// Incident cells of every edge; second entry is -1 on the boundary.
  std::vector<std::array<int, 2>> edge_cells;

  std::unordered_map<std::uint64_t, int> index;

  int num_edges() const { return static_cast<int>(edges.size()); }
  /// Edge id joining u and v, or -1.
  int find(int u, int v) const;
};

/// Builds edge incidence. Throws degenerate if an edge has more than two cells.
EdgeTopology build_edges(const Mesh& mesh);

double signed_area(const Mesh& mesh, int cell);
/// Longest edge of the cell.
double cell_diameter(const Mesh& mesh, int cell);
double total_area(const Mesh& mesh);

/// Structured mesh of (0,1)^2 with n cells per side, 2n^2 right triangles.
Mesh unit_square_mesh(int n);

/// (-1,1)^2 \ [0,1)^2 from 3 n^2 squares, each split into 2 triangles.
Mesh l_shaped_mesh(int n = 1);

/// Red refinement: every triangle is split into 4 similar children through
/// its edge midpoints.
Mesh uniform_refine(const Mesh& mesh);

/// Newest-vertex bisection of the marked cells plus conformity closure.
Mesh bisect_refine(const Mesh& mesh, std::span<const int> marked);

/// Checks positive areas, edge incidence and boundary flags; throws
/// degenerate on the first violation.
void validate(const Mesh& mesh);

/// Text dump: "nv nc", nv lines "x y b", nc lines "i j k".
void write_mesh(const Mesh& mesh, std::ostream& out);
Mesh read_mesh(std::istream& in);

}  // namespace semimg
