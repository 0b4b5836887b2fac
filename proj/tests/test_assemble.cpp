#include <doctest.h>

#include "oracles.hpp"
#include "semimg/assemble.hpp"
#include "semimg/error.hpp"
#include "semimg/problems.hpp"
#include "semimg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace semimg;

namespace {

constexpr double pi = std::numbers::pi;

double rule_integral(const QuadratureRule& q, int a, int b) {
  // Reference triangle (0,0), (1,0), (0,1): x = l1, y = l2, area 1/2.
  double s = 0.0;
  for (int i = 0; i < q.size(); ++i) s += q.weights[i] * std::pow(q.points[i][1], a) * std::pow(q.points[i][2], b);
  return 0.5 * s;
}

Vector random_vector(int n, std::mt19937_64& gen, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vector v(n);
  for (double& x : v) x = d(gen);
  return v;
}

std::array<Point, 3> random_triangle(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  while (true) {
    std::array<Point, 3> p{Point{d(gen), d(gen)}, Point{d(gen), d(gen)}, Point{d(gen), d(gen)}};
    const double a = oracle::area(p[0], p[1], p[2]);
    if (a < -0.1) std::swap(p[1], p[2]);
    if (std::abs(a) > 0.1) return p;
  }
}

NonlinearTerm identity_term() {
  NonlinearTerm f;
  f.name = "u";
  f.eval = [](double, double, double u) { return u; };
  f.derivative = [](double, double, double) { return 1.0; };
  return f;
}

}  // namespace

TEST_CASE("quadrature rules are exact to their degree") {
  for (int degree : {1, 2, 3, 4, 5, 6, 7, 8, 10}) {
    const QuadratureRule q = triangle_rule(degree);
    CHECK(q.degree >= degree);
    double wsum = 0.0;
    for (int i = 0; i < q.size(); ++i) {
      CHECK(q.weights[i] > 0.0);
      CHECK(std::abs(q.points[i][0] + q.points[i][1] + q.points[i][2] - 1.0) <= 1e-15);
      wsum += q.weights[i];
    }
    CHECK(std::abs(wsum - 1.0) <= 1e-14);
    for (int a = 0; a <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        CHECK(std::abs(rule_integral(q, a, b) - oracle::monomial_integral(a, b)) <= 1e-13);
      }
    }
  }
  for (int n = 1; n <= 6; ++n) {
    const QuadratureRule q = collapsed_gauss_rule(n);
    CHECK(q.degree == 2 * n - 2);
    for (int a = 0; a <= q.degree; ++a)
      for (int b = 0; a + b <= q.degree; ++b)
        CHECK(std::abs(rule_integral(q, a, b) - oracle::monomial_integral(a, b)) <= 1e-13);
  }
  CHECK(default_rule().degree == 4);
  CHECK(error_rule().degree == 6);
}

TEST_CASE("Gauss-Legendre on [0, 1]") {
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  for (int k = 0; k <= 9; ++k) {
    double s = 0;
    for (int i = 0; i < 5; ++i) s += w[i] * std::pow(x[i], k);
    CHECK(std::abs(s - 1.0 / (k + 1)) <= 1e-15);
  }
  double s = 0;
  for (const auto& [t, wt] : edge_gauss2()) s += wt * t * t * t;
  CHECK(std::abs(s - 0.25) <= 1e-15);
}

TEST_CASE("diffusion coefficient must be symmetric positive definite") {
  CHECK_NOTHROW(DiffusionCoefficient(2.0, 0.5, 0.5, 1.0));
  CHECK_THROWS_AS(DiffusionCoefficient(1.0, 0.5, 0.4, 1.0), Error);
  CHECK_THROWS_AS(DiffusionCoefficient(1.0, 2.0, 2.0, 1.0), Error);
  CHECK_THROWS_AS(DiffusionCoefficient(-1.0, 0.0, 0.0, 1.0), Error);
}

TEST_CASE("local stiffness matches symbolic integration") {
  const LocalMatrix k = local_stiffness({0, 0}, {1, 0}, {0, 1}, DiffusionCoefficient{});
  const double expected[3][3] = {{1, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(k[i][j] - expected[i][j]) <= 1e-12);

  auto gen = oracle::rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto p = random_triangle(gen);
    const LocalMatrix a = local_stiffness(p[0], p[1], p[2], DiffusionCoefficient{});
    const auto ref = oracle::cotangent_stiffness(p[0], p[1], p[2]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(a[i][j] - ref[i][j]) <= 1e-12 * (1.0 + std::abs(ref[i][j])));
  }
  // Anisotropic A: gradients of an affine function give (A g, g) * area.
  const DiffusionCoefficient a(2.0, 0.5, 0.5, 1.0);
  const auto p = random_triangle(gen);
  const LocalMatrix ka = local_stiffness(p[0], p[1], p[2], a);
  const double gx = 0.7, gy = -1.3;
  std::array<double, 3> u{};
  for (int i = 0; i < 3; ++i) u[i] = gx * p[i][0] + gy * p[i][1];
  double quad = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) quad += u[i] * ka[i][j] * u[j];
  const double expected_energy = (2.0 * gx * gx + 2 * 0.5 * gx * gy + gy * gy) * oracle::area(p[0], p[1], p[2]);
  CHECK(std::abs(quad - expected_energy) <= 1e-12);
  CHECK_THROWS_AS((void)local_stiffness({0, 0}, {1, 0}, {2, 0}, DiffusionCoefficient{}), Error);
}

TEST_CASE("local mass matches symbolic integration") {
  auto gen = oracle::rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_triangle(gen);
    const double area = oracle::area(p[0], p[1], p[2]);
    const LocalMatrix m = local_mass(p[0], p[1], p[2], default_rule());
    for (int i = 0; i < 3; ++i) {
      double row = 0.0;
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(m[i][j] - area / 12.0 * (i == j ? 2.0 : 1.0)) <= 1e-12);
        row += m[i][j];
      }
      CHECK(std::abs(row - area / 3.0) <= 1e-12);
    }
  }
}

TEST_CASE("stiffness assembly") {
  const FESpace s2 = build_fespace(unit_square_mesh(2));
  const CsrMatrix a2 = assemble_stiffness(s2, DiffusionCoefficient{});
  // Five-point stencil on a uniform grid: (4 u_c - sum neighbours) / h^2 * h^2.
  CHECK(std::abs(a2.at(0, 0) - 4.0) <= 1e-14);

  // Interior rows of the structured mesh reproduce the five-point stencil.
  const int n = 6;
  const FESpace s = build_fespace(unit_square_mesh(n));
  const CsrMatrix a = assemble_stiffness(s, DiffusionCoefficient{});
  for (int i = 0; i < s.num_free(); ++i) {
    const Point& pi_ = s.dof_point(i);
    for (int j = 0; j < s.num_free(); ++j) {
      const Point& pj = s.dof_point(j);
      const int dx = static_cast<int>(std::lround((pj[0] - pi_[0]) * n));
      const int dy = static_cast<int>(std::lround((pj[1] - pi_[1]) * n));
      double expected = 0.0;
      if (dx == 0 && dy == 0) expected = 4.0;
      else if (std::abs(dx) + std::abs(dy) == 1) expected = -1.0;
      CHECK(std::abs(a.at(i, j) - expected) <= 1e-13);
    }
  }

  auto gen = oracle::rng(13);
  const FESpace l = build_fespace(uniform_refine(l_shaped_mesh(2)));
  const CsrMatrix al = assemble_stiffness(l, DiffusionCoefficient(2.0, 0.5, 0.5, 1.0));
  for (int t = 0; t < 10; ++t) {
    const Vector x = random_vector(al.n_rows, gen);
    CHECK(dot(x, multiply(al, x)) > 0.0);
  }
}

TEST_CASE("stiffness kernel contains the constants without constraints") {
  const Mesh m = uniform_refine(l_shaped_mesh(1));
  Vector row(m.num_vertices(), 0.0);
  for (const Cell& c : m.cells) {
    const LocalMatrix k = local_stiffness(m.vertices[c[0]], m.vertices[c[1]], m.vertices[c[2]], DiffusionCoefficient{});
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) row[c[i]] += k[i][j];
  }
  for (double r : row) CHECK(std::abs(r) <= 1e-12);

  double total = 0.0;
  for (const Cell& c : m.cells) {
    const LocalMatrix mm = local_mass(m.vertices[c[0]], m.vertices[c[1]], m.vertices[c[2]], default_rule());
    for (const auto& r : mm)
      for (double v : r) total += v;
  }
  CHECK(std::abs(total - 3.0) <= 1e-12);
}

TEST_CASE("load assembly") {
  const FESpace s2 = build_fespace(unit_square_mesh(2));
  const Vector one = assemble_load(s2, [](double, double) { return 1.0; });
  CHECK(std::abs(one[0] - 0.25) <= 1e-14);
  for (double v : assemble_load(build_fespace(unit_square_mesh(4)), [](double, double) { return 0.0; })) CHECK(v == 0.0);

  const FESpace s = build_fespace(uniform_refine(l_shaped_mesh(2)));
  auto affine = [](double x, double y) { return 1.0 + 3.0 * x - 2.0 * y; };
  CHECK(oracle::max_abs_diff(assemble_load(s, affine, triangle_rule(2)), assemble_load(s, affine, triangle_rule(4))) <= 1e-13);

  // (g, phi_i) for g = 1 equals one third of the patch area.
  const Vector ones = assemble_load(s, [](double, double) { return 1.0; });
  const Mesh& m = *s.mesh;
  for (int i = 0; i < s.num_free(); ++i) {
    double patch = 0.0;
    for (int c = 0; c < m.num_cells(); ++c) {
      for (int v : m.cells[c]) {
        if (v == s.free_dofs[i]) patch += signed_area(m, c);
      }
    }
    CHECK(std::abs(ones[i] - patch / 3.0) <= 1e-14);
  }
}

TEST_CASE("nonlinear residual") {
  auto gen = oracle::rng(14);
  const FESpace s = build_fespace(uniform_refine(unit_square_mesh(3)));
  const Vector u = random_vector(s.num_free(), gen);
  for (double v : nonlinear_residual(s, NonlinearTerm::zero(), u)) CHECK(v == 0.0);

  const CsrMatrix mass = assemble_mass(s);
  CHECK(oracle::max_abs_diff(nonlinear_residual(s, identity_term(), u), multiply(mass, u)) <= 1e-13);

  // u^3 on one cell against the exact barycentric integral of the cubic.
  const FESpace s2 = build_fespace(unit_square_mesh(2));
  const Vector c{0.8};
  const Vector r = nonlinear_residual(s2, example1_2d().nonlinear, c);
  const Mesh& m = *s2.mesh;
  double expected = 0.0;
  for (int cell = 0; cell < m.num_cells(); ++cell) {
    for (int slot = 0; slot < 3; ++slot) {
      if (m.cells[cell][slot] != s2.free_dofs[0]) continue;
      // u_h = c * l_slot on this cell; integral of (c l)^3 l = c^3 * int l^4.
      expected += c[0] * c[0] * c[0] * oracle::barycentric_integral(4, 0, 0, signed_area(m, cell));
    }
  }
  CHECK(std::abs(r[0] - expected) <= 1e-14);
}

TEST_CASE("cubic reaction on a single cell matches the exact integral") {
  auto gen = oracle::rng(15);
  const auto p = random_triangle(gen);
  const double area = oracle::area(p[0], p[1], p[2]);
  const Vector nodal = random_vector(3, gen);
  // Barycentric expansion of int (sum u_j l_j)^3 l_i.
  for (int i = 0; i < 3; ++i) {
    double exact = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          int e[3] = {0, 0, 0};
          ++e[a], ++e[b], ++e[c], ++e[i];
          exact += nodal[a] * nodal[b] * nodal[c] * oracle::barycentric_integral(e[0], e[1], e[2], area);
        }
    double quad = 0.0;
    const QuadratureRule& q = default_rule();
    for (int k = 0; k < q.size(); ++k) {
      const auto& l = q.points[k];
      const double uq = l[0] * nodal[0] + l[1] * nodal[1] + l[2] * nodal[2];
      quad += q.weights[k] * uq * uq * uq * l[i];
    }
    CHECK(std::abs(area * quad - exact) <= 1e-14);
  }
}

TEST_CASE("nonlinear jacobian") {
  auto gen = oracle::rng(16);
  const FESpace s = build_fespace(uniform_refine(unit_square_mesh(3)));
  const Vector u = random_vector(s.num_free(), gen, -2.0, 2.0);
  for (const ProblemSpec& p : {example1_2d(), example2_2d(), example3_2d()}) {
    const CsrMatrix j = nonlinear_jacobian(s, p.nonlinear, u);
    NonlinearTerm fd = p.nonlinear;
    fd.derivative = nullptr;
    const CsrMatrix jfd = nonlinear_jacobian(s, fd, u);
    CHECK(j.col_indices == jfd.col_indices);
    CHECK(oracle::max_abs_diff(j.values, jfd.values) <= 1e-7);
    // Directional derivative of the residual.
    const Vector dir = random_vector(s.num_free(), gen);
    const double h = 1e-6;
    Vector up = u, um = u;
    axpy(h, dir, up);
    axpy(-h, dir, um);
    const Vector fd_dir = (1.0 / (2 * h)) * (nonlinear_residual(s, p.nonlinear, up) - nonlinear_residual(s, p.nonlinear, um));
    CHECK(oracle::max_abs_diff(multiply(j, dir), fd_dir) <= 1e-6);
  }
}

TEST_CASE("non-finite reaction values are reported") {
  const FESpace s = build_fespace(unit_square_mesh(4));
  NonlinearTerm bad;
  bad.name = "log";
  bad.eval = [](double, double, double u) { return std::log(u); };
  try {
    (void)nonlinear_residual(s, bad, Vector(s.num_free(), -1.0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::evaluation);
  }
  try {
    (void)nonlinear_residual(s, bad, Vector(s.num_free(), -1.0), default_rule(), Exec::serial);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::evaluation);
  }
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
  auto gen = oracle::rng(17);
  const FESpace s = build_fespace(uniform_refine(uniform_refine(l_shaped_mesh(2))));
  const ProblemSpec p = example3_2d();
  const Vector u = random_vector(s.num_free(), gen);
  const DiffusionCoefficient a(2.0, 0.5, 0.5, 1.0);
  const CsrMatrix k1 = assemble_stiffness(s, a, Exec::serial), k2 = assemble_stiffness(s, a, Exec::parallel);
  CHECK(k1.values == k2.values);
  CHECK(k1.col_indices == k2.col_indices);
  CHECK(assemble_mass(s, default_rule(), Exec::serial).values == assemble_mass(s, default_rule(), Exec::parallel).values);
  CHECK(assemble_load(s, p.source, default_rule(), Exec::serial) == assemble_load(s, p.source, default_rule(), Exec::parallel));
  CHECK(nonlinear_residual(s, p.nonlinear, u, default_rule(), Exec::serial) ==
        nonlinear_residual(s, p.nonlinear, u, default_rule(), Exec::parallel));
  CHECK(nonlinear_jacobian(s, p.nonlinear, u, default_rule(), Exec::serial).values ==
        nonlinear_jacobian(s, p.nonlinear, u, default_rule(), Exec::parallel).values);
  const ErrorNorms e1 = error_norms(s, u, p.exact->u, p.exact->grad, a, error_rule(), Exec::serial);
  const ErrorNorms e2 = error_norms(s, u, p.exact->u, p.exact->grad, a, error_rule(), Exec::parallel);
  CHECK(e1.energy == e2.energy);
  CHECK(e1.l2 == e2.l2);
}

TEST_CASE("monotone and Lipschitz reaction terms") {
  auto gen = oracle::rng(18);
  const FESpace s = build_fespace(uniform_refine(unit_square_mesh(2)));
  const CsrMatrix mass = assemble_mass(s);
  double mass_row_max = 0.0;
  for (int i = 0; i < mass.n_rows; ++i) {
    double r = 0.0;
    for (int q = mass.row_offsets[i]; q < mass.row_offsets[i + 1]; ++q) r += std::abs(mass.values[q]);
    mass_row_max = std::max(mass_row_max, r);
  }
  for (const ProblemSpec& p : {example1_2d(), example2_2d(), example3_2d(), example4_2d()}) {
    // Documented constant: lipschitz(-5, 5) times the largest mass row sum.
    const double c = p.nonlinear.lipschitz(-5.0, 5.0) * mass_row_max;
    for (int t = 0; t < 20; ++t) {
      const Vector w = random_vector(s.num_free(), gen, -5.0, 5.0);
      const Vector v = random_vector(s.num_free(), gen, -5.0, 5.0);
      const Vector dr = nonlinear_residual(s, p.nonlinear, w) - nonlinear_residual(s, p.nonlinear, v);
      const Vector du = w - v;
      CHECK(dot(dr, du) >= -1e-12);
      CHECK(norm2(dr) <= c * norm2(du) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("error norms") {
  SUBCASE("a P1 function has zero error against itself") {
    const FESpace s = build_fespace(unit_square_mesh(3));
    auto gen = oracle::rng(19);
    const Vector u = random_vector(s.num_free(), gen);
    const Vector values = expand(s, u);
    const Mesh& m = *s.mesh;
    const ErrorNorms e = error_norms(
        s, u, [&](double x, double y) { return oracle::evaluate_p1(m, values, {x, y}); },
        [&](double x, double y) { return oracle::gradient_p1(m, values, {x, y}); }, DiffusionCoefficient{});
    CHECK(e.energy <= 1e-13);
    CHECK(e.l2 <= 1e-13);
  }
  SUBCASE("zero discrete function against the sine product") {
    const FESpace s = build_fespace(unit_square_mesh(32));
    const ProblemSpec p = example1_2d();
    const ErrorNorms e = error_norms(s, Vector(s.num_free(), 0.0), p.exact->u, p.exact->grad, DiffusionCoefficient{});
    CHECK(std::abs(e.l2 - 0.5) <= 1e-6);
    CHECK(std::abs(e.energy - pi / std::sqrt(2.0)) <= 1e-6);
  }
  SUBCASE("errors do not depend on the vertex numbering") {
    const Mesh m = uniform_refine(unit_square_mesh(3));
    Mesh r = m;
    const int nv = m.num_vertices();
    for (int v = 0; v < nv; ++v) {
      r.vertices[nv - 1 - v] = m.vertices[v];
      r.boundary_vertex[nv - 1 - v] = m.boundary_vertex[v];
    }
    for (Cell& c : r.cells)
      for (int& v : c) v = nv - 1 - v;
    r.vertex_origin.clear();
    r.cell_parent.clear();
    const ProblemSpec p = example3_2d();
    const FESpace sm = build_fespace(m), sr = build_fespace(r);
    const auto bump = [](double x, double y) { return x * (1 - x) * y * (1 - y) * (1 + x); };
    const ErrorNorms a = error_norms(sm, interpolate(sm, bump), p.exact->u, p.exact->grad, DiffusionCoefficient{});
    const ErrorNorms b = error_norms(sr, interpolate(sr, bump), p.exact->u, p.exact->grad, DiffusionCoefficient{});
    CHECK(std::abs(a.energy - b.energy) <= 1e-12);
    CHECK(std::abs(a.l2 - b.l2) <= 1e-12);
  }
}
