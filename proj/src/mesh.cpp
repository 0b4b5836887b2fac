#include "semimg/mesh.hpp"

#include "semimg/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <string>

namespace semimg {

namespace {

std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

double distance(const Point& p, const Point& q) {
  return std::hypot(p[0] - q[0], p[1] - q[1]);
}

Point midpoint(const Point& p, const Point& q) {
  return {0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])};
}

// Rotates the cell so that the vertex opposite the longest edge comes first.
// Ties go to the lowest vertex index.
Cell label_newest_vertex(const Mesh& mesh, Cell cell) {
  int best = 0;
  double best_len = -1.0;
  for (int k = 0; k < 3; ++k) {
    const double len = distance(mesh.vertices[cell[(k + 1) % 3]], mesh.vertices[cell[(k + 2) % 3]]);
    const bool longer = len > best_len * (1.0 + 1e-12);
    const bool tie = !longer && len >= best_len * (1.0 - 1e-12);
    if (longer || (tie && cell[k] < cell[best])) {
      best = k;
      best_len = std::max(len, best_len);
    }
  }
  return {cell[best], cell[(best + 1) % 3], cell[(best + 2) % 3]};
}

void finalize(Mesh& mesh) {
  const EdgeTopology topo = build_edges(mesh);
  mesh.boundary_vertex.assign(mesh.vertices.size(), false);
  for (int e = 0; e < topo.num_edges(); ++e) {
    if (topo.edge_cells[e][1] < 0) {
      mesh.boundary_vertex[topo.edges[e][0]] = true;
      mesh.boundary_vertex[topo.edges[e][1]] = true;
    }
  }
  mesh.h_max = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) mesh.h_max = std::max(mesh.h_max, cell_diameter(mesh, c));
}

}  // namespace

int EdgeTopology::find(int u, int v) const {
  const auto it = index.find(edge_key(u, v));
  return it == index.end() ? -1 : it->second;
}

EdgeTopology build_edges(const Mesh& mesh) {
  EdgeTopology topo;
  topo.cell_edges.resize(mesh.cells.size());
  topo.index.reserve(mesh.cells.size() * 2);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cells[c];
    for (int k = 0; k < 3; ++k) {
      const int u = cell[k];
      const int v = cell[(k + 1) % 3];
      auto [it, inserted] = topo.index.try_emplace(edge_key(u, v), topo.num_edges());
      if (inserted) {
        topo.edges.push_back({std::min(u, v), std::max(u, v)});
        topo.edge_cells.push_back({c, -1});
      } else {
        auto& incident = topo.edge_cells[it->second];
        if (incident[1] >= 0) {
          fail(ErrorCategory::degenerate,
               "edge (" + std::to_string(u) + "," + std::to_string(v) + ") has more than two cells");
        }
        incident[1] = c;
      }
      topo.cell_edges[c][k] = it->second;
    }
  }
  return topo;
}

double signed_area(const Mesh& mesh, int cell) {
  const auto& [i, j, k] = mesh.cells[cell];
  const Point& a = mesh.vertices[i];
  const Point& b = mesh.vertices[j];
  const Point& c = mesh.vertices[k];
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

double cell_diameter(const Mesh& mesh, int cell) {
  const auto& [i, j, k] = mesh.cells[cell];
  const auto& v = mesh.vertices;
  return std::max({distance(v[i], v[j]), distance(v[j], v[k]), distance(v[k], v[i])});
}

double total_area(const Mesh& mesh) {
  double area = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) area += signed_area(mesh, c);
  return area;
}

Mesh unit_square_mesh(int n) {
  require(n >= 1, ErrorCategory::invalid_argument, "unit_square_mesh: n must be >= 1");
  Mesh mesh;
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) mesh.vertices.push_back({i == n ? 1.0 : i * h, j == n ? 1.0 : j * h});
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // Right angle first: the diagonal is the refinement edge of both halves.
      mesh.cells.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j)});
      mesh.cells.push_back({id(i, j + 1), id(i, j), id(i + 1, j + 1)});
    }
  }
  finalize(mesh);
  return mesh;
}

Mesh l_shaped_mesh(int n) {
  require(n >= 1, ErrorCategory::invalid_argument, "l_shaped_mesh: n must be >= 1");
  Mesh mesh;
  const int m = 2 * n;
  const double h = 1.0 / n;
  std::vector<int> id((m + 1) * (m + 1), -1);
  auto coord = [&](int i) { return i == n ? 0.0 : -1.0 + i * h; };
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) {
      if (i > n && j > n) continue;
      id[j * (m + 1) + i] = mesh.num_vertices();
      mesh.vertices.push_back({i == m ? 1.0 : coord(i), j == m ? 1.0 : coord(j)});
    }
  }
  auto at = [&](int i, int j) { return id[j * (m + 1) + i]; };
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (i >= n && j >= n) continue;
      mesh.cells.push_back({at(i + 1, j), at(i + 1, j + 1), at(i, j)});
      mesh.cells.push_back({at(i, j + 1), at(i, j), at(i + 1, j + 1)});
    }
  }
  finalize(mesh);
  return mesh;
}

Mesh uniform_refine(const Mesh& mesh) {
  const EdgeTopology topo = build_edges(mesh);
  Mesh fine;
  fine.level = mesh.level + 1;
  fine.vertices = mesh.vertices;
  fine.vertex_origin.reserve(mesh.vertices.size() + topo.edges.size());
  for (int v = 0; v < mesh.num_vertices(); ++v) fine.vertex_origin.push_back(VertexOrigin::from_vertex(v));

  std::vector<int> edge_mid(topo.edges.size(), -1);
  fine.cells.reserve(mesh.cells.size() * 4);
  fine.cell_parent.reserve(mesh.cells.size() * 4);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    std::array<int, 3> mid{};
    for (int k = 0; k < 3; ++k) {
      const int e = topo.cell_edges[c][k];
      if (edge_mid[e] < 0) {
        const auto [u, v] = topo.edges[e];
        edge_mid[e] = fine.num_vertices();
        fine.vertices.push_back(midpoint(mesh.vertices[u], mesh.vertices[v]));
        fine.vertex_origin.push_back(VertexOrigin::midpoint(u, v));
      }
      mid[k] = edge_mid[e];
    }
    const auto [v0, v1, v2] = mesh.cells[c];
    const int m01 = mid[0], m12 = mid[1], m20 = mid[2];
    for (const Cell& child : {Cell{v0, m01, m20}, Cell{m01, v1, m12}, Cell{m20, m12, v2}, Cell{m12, m20, m01}}) {
      fine.cells.push_back(child);
      fine.cell_parent.push_back(c);
    }
  }
  finalize(fine);
  return fine;
}

Mesh bisect_refine(const Mesh& mesh, std::span<const int> marked) {
  const EdgeTopology topo = build_edges(mesh);
  const int n_edges = topo.num_edges();
  std::vector<char> split(n_edges, 0);
  std::deque<int> queue;
  for (const int c : marked) {
    require(c >= 0 && c < mesh.num_cells(), ErrorCategory::invalid_argument,
            "bisect_refine: marked cell " + std::to_string(c) + " out of range");
    const int e = topo.cell_edges[c][1];
    if (!split[e]) {
      split[e] = 1;
      queue.push_back(e);
    }
  }

  // Closure: a cell with any split edge must split its refinement edge too.
  long processed = 0;
  while (!queue.empty()) {
    if (++processed > static_cast<long>(n_edges) + 1) {
      fail(ErrorCategory::internal, "bisect_refine: conformity closure did not terminate");
    }
    const int e = queue.front();
    queue.pop_front();
    for (const int c : topo.edge_cells[e]) {
      if (c < 0) continue;
      const int r = topo.cell_edges[c][1];
      if (!split[r]) {
        split[r] = 1;
        queue.push_back(r);
      }
    }
  }

  Mesh fine;
  fine.level = mesh.level + 1;
  fine.vertices = mesh.vertices;
  for (int v = 0; v < mesh.num_vertices(); ++v) fine.vertex_origin.push_back(VertexOrigin::from_vertex(v));
  std::vector<int> edge_mid(n_edges, -1);
  auto mid_of = [&](int e) {
    if (edge_mid[e] < 0) {
      const auto [u, v] = topo.edges[e];
      edge_mid[e] = fine.num_vertices();
      fine.vertices.push_back(midpoint(mesh.vertices[u], mesh.vertices[v]));
      fine.vertex_origin.push_back(VertexOrigin::midpoint(u, v));
    }
    return edge_mid[e];
  };

  // Only coarse edges can be split, and the refinement edge of a grandchild
  // is never a coarse edge, so the recursion depth is at most 2.
  auto bisect = [&](auto&& self, const Cell& cell, int parent, int depth) -> void {
    const int e = depth <= 1 ? topo.find(cell[1], cell[2]) : -1;
    if (e >= 0 && split[e]) {
      const int m = mid_of(e);
      self(self, Cell{m, cell[0], cell[1]}, parent, depth + 1);
      self(self, Cell{m, cell[2], cell[0]}, parent, depth + 1);
    } else {
      fine.cells.push_back(cell);
      fine.cell_parent.push_back(parent);
    }
  };
  for (int c = 0; c < mesh.num_cells(); ++c) bisect(bisect, mesh.cells[c], c, 0);

  finalize(fine);
  return fine;
}

void validate(const Mesh& mesh) {
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (const int v : mesh.cells[c]) {
      require(v >= 0 && v < mesh.num_vertices(), ErrorCategory::degenerate,
              "cell " + std::to_string(c) + " references missing vertex");
    }
    require(signed_area(mesh, c) > 0.0, ErrorCategory::degenerate,
            "cell " + std::to_string(c) + " has non-positive area");
  }
  const EdgeTopology topo = build_edges(mesh);
  std::vector<bool> on_boundary(mesh.vertices.size(), false);
  for (int e = 0; e < topo.num_edges(); ++e) {
    if (topo.edge_cells[e][1] < 0) on_boundary[topo.edges[e][0]] = on_boundary[topo.edges[e][1]] = true;
  }
  require(on_boundary == mesh.boundary_vertex, ErrorCategory::degenerate,
          "boundary flags disagree with edge incidence");
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    out << mesh.vertices[v][0] << ' ' << mesh.vertices[v][1] << ' ' << (mesh.boundary_vertex[v] ? 1 : 0) << '\n';
  }
  for (const Cell& c : mesh.cells) out << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out.precision(old_precision);
}

Mesh read_mesh(std::istream& in) {
  int nv = 0, nc = 0;
  if (!(in >> nv >> nc) || nv < 0 || nc < 0) fail(ErrorCategory::io, "read_mesh: bad header");
  Mesh mesh;
  mesh.vertices.resize(nv);
  mesh.boundary_vertex.resize(nv);
  for (int v = 0; v < nv; ++v) {
    int b = 0;
    if (!(in >> mesh.vertices[v][0] >> mesh.vertices[v][1] >> b)) fail(ErrorCategory::io, "read_mesh: truncated vertex list");
    mesh.boundary_vertex[v] = b != 0;
  }
  mesh.cells.resize(nc);
  for (Cell& c : mesh.cells) {
    if (!(in >> c[0] >> c[1] >> c[2])) fail(ErrorCategory::io, "read_mesh: truncated cell list");
    for (const int v : c) require(v >= 0 && v < nv, ErrorCategory::io, "read_mesh: vertex index out of range");
    c = label_newest_vertex(mesh, c);
  }
  for (int c = 0; c < nc; ++c) mesh.h_max = std::max(mesh.h_max, cell_diameter(mesh, c));
  validate(mesh);
  return mesh;
}

}  // namespace semimg
