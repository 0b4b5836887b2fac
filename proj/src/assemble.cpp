#include "semimg/assemble.hpp"

#include "semimg/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace semimg {

DiffusionCoefficient::DiffusionCoefficient(double a11, double a12, double a21, double a22)
    : a11_(a11), a12_(a12), a22_(a22) {
  const double scale = std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22), 1.0});
  require(std::abs(a12 - a21) <= 1e-14 * scale, ErrorCategory::invalid_argument,
          "DiffusionCoefficient: matrix is not symmetric");
  require(a11 > 0.0 && a11 * a22 - a12 * a12 > 0.0, ErrorCategory::invalid_argument,
          "DiffusionCoefficient: matrix is not positive definite");
}

std::array<Point, 3> basis_gradients(const Point& p0, const Point& p1, const Point& p2) {
  const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
  require(det != 0.0, ErrorCategory::degenerate, "basis_gradients: degenerate cell");
  return {Point{(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det}, Point{(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det},
          Point{(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det}};
}

LocalMatrix local_stiffness(const Point& p0, const Point& p1, const Point& p2, const DiffusionCoefficient& a) {
  const double area = 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
  require(area > 0.0, ErrorCategory::degenerate, "local_stiffness: cell has non-positive area");
  const auto grads = basis_gradients(p0, p1, p2);
  LocalMatrix k{};
  for (int i = 0; i < 3; ++i) {
    const Point ag = a.apply(grads[i]);
    for (int j = 0; j < 3; ++j) k[i][j] = area * (ag[0] * grads[j][0] + ag[1] * grads[j][1]);
  }
  return k;
}

LocalMatrix local_mass(const Point& p0, const Point& p1, const Point& p2, const QuadratureRule& quad) {
  const double area = 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
  LocalMatrix m{};
  for (int q = 0; q < quad.size(); ++q) {
    const auto& l = quad.points[q];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] += quad.weights[q] * l[i] * l[j];
  }
  for (auto& row : m)
    for (double& v : row) v *= area;
  return m;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = triangle_rule(4);
  return rule;
}

const QuadratureRule& error_rule() {
  static const QuadratureRule rule = triangle_rule(6);
  return rule;
}

namespace {

struct CellGeometry {
  Point p0, p1, p2;
  double area;

  Point map(const std::array<double, 3>& l) const {
    return {l[0] * p0[0] + l[1] * p1[0] + l[2] * p2[0], l[0] * p0[1] + l[1] * p1[1] + l[2] * p2[1]};
  }
};

CellGeometry geometry(const Mesh& mesh, int c) {
  const Cell& cell = mesh.cells[c];
  CellGeometry g{mesh.vertices[cell[0]], mesh.vertices[cell[1]], mesh.vertices[cell[2]], signed_area(mesh, c)};
  if (!(g.area > 0.0)) fail(ErrorCategory::degenerate, "cell " + std::to_string(c) + " has non-positive area");
  return g;
}

// Both variants add contributions to every entry in ascending cell order, so
// their results are bitwise identical. The parallel one first evaluates all
// element matrices, then gathers rows independently.
template <class Kernel>
CsrMatrix assemble_matrix(const FESpace& space, Kernel&& local, Exec exec) {
  const Mesh& mesh = *space.mesh;
  CsrMatrix m;
  m.n_rows = m.n_cols = space.num_free();
  m.row_offsets = space.pattern_offsets;
  m.col_indices = space.pattern_cols;
  m.values.assign(m.col_indices.size(), 0.0);
  m.symmetric = true;
  const auto& to_free = space.vertex_to_free;

  if (exec == Exec::serial) {
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const LocalMatrix k = local(c);
      const Cell& cell = mesh.cells[c];
      for (int a = 0; a < 3; ++a) {
        const int i = to_free[cell[a]];
        if (i < 0) continue;
        for (int b = 0; b < 3; ++b) {
          const int j = to_free[cell[b]];
          if (j >= 0) m.values[m.find(i, j)] += k[a][b];
        }
      }
    }
    return m;
  }

  const int nc = mesh.num_cells();
  std::vector<LocalMatrix> locals(nc);
  parallel_for(nc, [&](int c) { locals[c] = local(c); });
  const int n = space.num_free();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const int v = space.free_dofs[i];
    for (int p = space.vertex_cell_offsets[v]; p < space.vertex_cell_offsets[v + 1]; ++p) {
      const int c = space.vertex_cells[p];
      const int a = space.vertex_cell_slot[p];
      const Cell& cell = mesh.cells[c];
      for (int b = 0; b < 3; ++b) {
        const int j = to_free[cell[b]];
        if (j >= 0) m.values[m.find(i, j)] += locals[c][a][b];
      }
    }
  }
  return m;
}

template <class Kernel>
Vector assemble_vector(const FESpace& space, Kernel&& local, Exec exec) {
  const Mesh& mesh = *space.mesh;
  const auto& to_free = space.vertex_to_free;
  Vector out(space.num_free(), 0.0);
  if (exec == Exec::serial) {
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const LocalVector r = local(c);
      const Cell& cell = mesh.cells[c];
      for (int a = 0; a < 3; ++a) {
        const int i = to_free[cell[a]];
        if (i >= 0) out[i] += r[a];
      }
    }
    return out;
  }

  const int nc = mesh.num_cells();
  std::vector<LocalVector> locals(nc);
  parallel_for(nc, [&](int c) { locals[c] = local(c); });
  const int n = space.num_free();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const int v = space.free_dofs[i];
    double s = 0.0;
    for (int p = space.vertex_cell_offsets[v]; p < space.vertex_cell_offsets[v + 1]; ++p) {
      s += locals[space.vertex_cells[p]][space.vertex_cell_slot[p]];
    }
    out[i] = s;
  }
  return out;
}

[[noreturn]] void report_bad_value(const NonlinearTerm& f, const Point& x, double u, double value) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "nonlinear term '" << f.name << "' evaluated to " << value << " at (" << x[0] << ", " << x[1]
      << ") with u = " << u;
  fail(ErrorCategory::evaluation, msg.str());
}

double derivative_at(const NonlinearTerm& f, double x, double y, double u) {
  if (f.has_derivative()) return f.derivative(x, y, u);
  const double h = 1e-6 * (1.0 + std::abs(u));
  return (f.eval(x, y, u + h) - f.eval(x, y, u - h)) / (2.0 * h);
}

}  // namespace

CsrMatrix assemble_stiffness(const FESpace& space, const DiffusionCoefficient& a, Exec exec) {
  const Mesh& mesh = *space.mesh;
  return assemble_matrix(
      space,
      [&](int c) {
        const CellGeometry g = geometry(mesh, c);
        return local_stiffness(g.p0, g.p1, g.p2, a);
      },
      exec);
}

CsrMatrix assemble_mass(const FESpace& space, const QuadratureRule& quad, Exec exec) {
  const Mesh& mesh = *space.mesh;
  return assemble_matrix(
      space,
      [&](int c) {
        const CellGeometry g = geometry(mesh, c);
        return local_mass(g.p0, g.p1, g.p2, quad);
      },
      exec);
}

Vector assemble_load(const FESpace& space, const ScalarField& g, const QuadratureRule& quad, Exec exec) {
  const Mesh& mesh = *space.mesh;
  return assemble_vector(
      space,
      [&](int c) {
        const CellGeometry geo = geometry(mesh, c);
        LocalVector r{};
        for (int q = 0; q < quad.size(); ++q) {
          const auto& l = quad.points[q];
          const Point x = geo.map(l);
          const double gv = quad.weights[q] * g(x[0], x[1]);
          for (int a = 0; a < 3; ++a) r[a] += gv * l[a];
        }
        for (double& v : r) v *= geo.area;
        return r;
      },
      exec);
}

Vector nonlinear_residual(const FESpace& space, const NonlinearTerm& f, std::span<const double> u,
                          const QuadratureRule& quad, Exec exec) {
  if (f.is_zero()) return Vector(space.num_free(), 0.0);
  const Mesh& mesh = *space.mesh;
  const Vector full = expand(space, u);
  return assemble_vector(
      space,
      [&](int c) {
        const CellGeometry geo = geometry(mesh, c);
        const Cell& cell = mesh.cells[c];
        LocalVector r{};
        for (int q = 0; q < quad.size(); ++q) {
          const auto& l = quad.points[q];
          const Point x = geo.map(l);
          const double uq = l[0] * full[cell[0]] + l[1] * full[cell[1]] + l[2] * full[cell[2]];
          const double fv = f.eval(x[0], x[1], uq);
          if (!std::isfinite(fv)) report_bad_value(f, x, uq, fv);
          for (int a = 0; a < 3; ++a) r[a] += quad.weights[q] * fv * l[a];
        }
        for (double& v : r) v *= geo.area;
        return r;
      },
      exec);
}

CsrMatrix nonlinear_jacobian(const FESpace& space, const NonlinearTerm& f, std::span<const double> u,
                             const QuadratureRule& quad, Exec exec) {
  const Mesh& mesh = *space.mesh;
  if (f.is_zero()) return assemble_matrix(space, [](int) { return LocalMatrix{}; }, Exec::serial);
  const Vector full = expand(space, u);
  return assemble_matrix(
      space,
      [&](int c) {
        const CellGeometry geo = geometry(mesh, c);
        const Cell& cell = mesh.cells[c];
        LocalMatrix k{};
        for (int q = 0; q < quad.size(); ++q) {
          const auto& l = quad.points[q];
          const Point x = geo.map(l);
          const double uq = l[0] * full[cell[0]] + l[1] * full[cell[1]] + l[2] * full[cell[2]];
          const double d = derivative_at(f, x[0], x[1], uq);
          if (!std::isfinite(d)) report_bad_value(f, x, uq, d);
          const double wd = quad.weights[q] * d;
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) k[a][b] += wd * l[a] * l[b];
        }
        for (auto& row : k)
          for (double& v : row) v *= geo.area;
        return k;
      },
      exec);
}

ErrorNorms error_norms(const FESpace& space, std::span<const double> u_h, const ScalarField& u_exact,
                       const GradientField& grad_exact, const DiffusionCoefficient& a, const QuadratureRule& quad,
                       Exec exec) {
  const Mesh& mesh = *space.mesh;
  const Vector full = expand(space, u_h);
  const int nc = mesh.num_cells();
  std::vector<std::array<double, 2>> parts(nc);
  auto cell_errors = [&](int c) {
    const CellGeometry geo = geometry(mesh, c);
    const Cell& cell = mesh.cells[c];
    const auto grads = basis_gradients(geo.p0, geo.p1, geo.p2);
    Point gh{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      gh[0] += full[cell[k]] * grads[k][0];
      gh[1] += full[cell[k]] * grads[k][1];
    }
    double e_energy = 0.0, e_l2 = 0.0;
    for (int q = 0; q < quad.size(); ++q) {
      const auto& l = quad.points[q];
      const Point x = geo.map(l);
      const double uh = l[0] * full[cell[0]] + l[1] * full[cell[1]] + l[2] * full[cell[2]];
      const Point ge = grad_exact(x[0], x[1]);
      const Point d{ge[0] - gh[0], ge[1] - gh[1]};
      const Point ad = a.apply(d);
      e_energy += quad.weights[q] * (d[0] * ad[0] + d[1] * ad[1]);
      const double du = u_exact(x[0], x[1]) - uh;
      e_l2 += quad.weights[q] * du * du;
    }
    parts[c] = {geo.area * e_energy, geo.area * e_l2};
  };
  if (exec == Exec::serial) {
    for (int c = 0; c < nc; ++c) cell_errors(c);
  } else {
    parallel_for(nc, cell_errors);
  }
  ErrorNorms norms;
  for (const auto& p : parts) {
    norms.energy += p[0];
    norms.l2 += p[1];
  }
  norms.energy = std::sqrt(norms.energy);
  norms.l2 = std::sqrt(norms.l2);
  return norms;
}

}  // namespace semimg
