#include <doctest.h>

#include "oracles.hpp"
#include "semimg/assemble.hpp"
#include "semimg/error.hpp"
#include "semimg/fespace.hpp"
#include "semimg/hierarchy.hpp"
#include "semimg/multigrid.hpp"
#include "semimg/problems.hpp"
#include "semimg/sparse.hpp"

#include <cmath>
#include <random>

using namespace semimg;

namespace {

Vector random_vector(int n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = d(gen);
  return v;
}

CsrMatrix dense_to_csr(const std::vector<std::vector<double>>& a) {
  std::vector<Triplet> t;
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    for (int j = 0; j < static_cast<int>(a[i].size()); ++j) {
      if (a[i][j] != 0.0) t.push_back({i, j, a[i][j]});
    }
  }
  return from_triplets(static_cast<int>(a.size()), static_cast<int>(a[0].size()), t);
}

Hierarchy poisson_hierarchy(int levels) {
  return build_hierarchy(without_nonlinearity(example1_2d()), levels, 2);
}

}  // namespace

TEST_CASE("triplet assembly") {
  const CsrMatrix a = from_triplets(3, 3, {{2, 1, 1.0}, {0, 2, 2.0}, {2, 1, 3.0}, {0, 0, 1.0}, {1, 1, 5.0}});
  CHECK(a.nnz() == 4);
  CHECK(a.at(2, 1) == 4.0);
  CHECK(a.at(0, 2) == 2.0);
  CHECK(a.at(1, 0) == 0.0);
  CHECK(a.find(1, 0) == -1);
  for (int i = 0; i < a.n_rows; ++i) {
    for (int p = a.row_offsets[i] + 1; p < a.row_offsets[i + 1]; ++p) CHECK(a.col_indices[p - 1] < a.col_indices[p]);
  }
  CHECK_THROWS_AS((void)from_triplets(2, 2, {{2, 0, 1.0}}), Error);
}

TEST_CASE("sparse products agree with dense algebra") {
  auto gen = oracle::rng(4);
  const FESpace s = build_fespace(unit_square_mesh(4));
  const CsrMatrix a = assemble_stiffness(s, DiffusionCoefficient{});
  const FESpace f = build_fespace(uniform_refine(*s.mesh));
  const CsrMatrix p = prolongation(s, f);
  const Vector x = random_vector(a.n_rows, gen);
  const Vector y = multiply(a, x);
  const Eigen::VectorXd ey = oracle::to_dense(a) * Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
  for (int i = 0; i < a.n_rows; ++i) CHECK(std::abs(y[i] - ey[i]) <= 1e-13);
  CHECK((oracle::to_dense(transpose(p)) - oracle::to_dense(p).transpose()).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd ap = oracle::to_dense(multiply(a, transpose(p)));
  CHECK((ap - oracle::to_dense(a) * oracle::to_dense(p).transpose()).cwiseAbs().maxCoeff() <= 1e-13);
  const Vector z = random_vector(p.n_rows, gen);
  const Vector ptz = multiply_transpose(p, z);
  const Vector ptz2 = multiply(transpose(p), z);
  CHECK(oracle::max_abs_diff(ptz, ptz2) <= 1e-14);
  CHECK(multiply(a, x, Exec::serial) == multiply(a, x, Exec::parallel));
}

TEST_CASE("assembled stiffness is symmetric on sampled entries") {
  auto gen = oracle::rng(5);
  const FESpace s = build_fespace(uniform_refine(l_shaped_mesh(2)));
  const CsrMatrix a = assemble_stiffness(s, DiffusionCoefficient(2.0, 0.5, 0.5, 1.0));
  CHECK(a.symmetric);
  for (int t = 0; t < 200; ++t) {
    const int i = static_cast<int>(gen() % a.n_rows);
    const int j = static_cast<int>(gen() % a.n_rows);
    CHECK(std::abs(a.at(i, j) - a.at(j, i)) <= 1e-12 * std::max(1.0, std::abs(a.at(i, j))));
  }
}

TEST_CASE("Gauss-Seidel") {
  auto gen = oracle::rng(6);
  SUBCASE("identity gives b after one sweep") {
    const CsrMatrix id = identity_matrix(5);
    const Vector b = random_vector(5, gen);
    Vector x(5, 0.0);
    gauss_seidel(id, b, x, 1, SweepOrder::forward);
    CHECK(x == b);
  }
  SUBCASE("the exact solution is a fixed point") {
    const CsrMatrix a = assemble_stiffness(build_fespace(unit_square_mesh(6)), DiffusionCoefficient{});
    const Vector xs = random_vector(a.n_rows, gen);
    const Vector b = multiply(a, xs);
    for (SweepOrder order : {SweepOrder::forward, SweepOrder::backward}) {
      Vector x = xs;
      gauss_seidel(a, b, x, 3, order);
      CHECK(oracle::max_abs_diff(x, xs) <= 1e-14);
    }
  }
  SUBCASE("2x2 SPD system converges to the direct solution") {
    const double a11 = 4, a12 = 1, a22 = 3, b1 = 1, b2 = 2;
    const CsrMatrix a = dense_to_csr({{a11, a12}, {a12, a22}});
    const double det = a11 * a22 - a12 * a12;
    const Vector exact{(a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det};
    for (SweepOrder order : {SweepOrder::forward, SweepOrder::backward}) {
      Vector x(2, 0.0);
      gauss_seidel(a, Vector{b1, b2}, x, 50, order);
      CHECK(oracle::max_abs_diff(x, exact) <= 1e-10);
    }
  }
  SUBCASE("zero diagonal is rejected") {
    const CsrMatrix a = dense_to_csr({{0, 1}, {1, 2}});
    Vector x(2, 0.0);
    try {
      gauss_seidel(a, Vector{1, 1}, x, 1, SweepOrder::forward);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.category() == ErrorCategory::singular);
    }
  }
}

TEST_CASE("Cholesky") {
  CHECK(cholesky_solve(DenseMatrix::from_sparse(identity_matrix(3)), Vector{1, 2, 3}) == Vector{1, 2, 3});
  {
    DenseMatrix a(2, 2);
    a(0, 0) = 2;
    a(1, 1) = 4;
    const Vector x = cholesky_solve(a, Vector{2, 8});
    CHECK(std::abs(x[0] - 1.0) <= 1e-15);
    CHECK(std::abs(x[1] - 2.0) <= 1e-15);
  }
  {
    auto gen = oracle::rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const int n = 10;
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = d(gen);
    const Eigen::MatrixXd spd = b * b.transpose() + n * Eigen::MatrixXd::Identity(n, n);
    DenseMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = spd(i, j);
    const Vector rhs = random_vector(n, gen);
    const Vector x = cholesky_solve(a, rhs);
    const Vector r = multiply(a, x);
    CHECK(oracle::max_abs_diff(r, rhs) <= 1e-10 * (1.0 + norm_inf(rhs)));
  }
  {
    DenseMatrix a(2, 2);
    a(0, 0) = 1;
    a(0, 1) = a(1, 0) = 2;
    a(1, 1) = 1;
    try {
      (void)Cholesky(a);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.category() == ErrorCategory::singular);
    }
  }
  {
    // Numerically dependent columns trip the pivot threshold.
    DenseMatrix a(2, 2);
    a(0, 0) = 1;
    a(0, 1) = a(1, 0) = 1;
    a(1, 1) = 1 + 1e-15;
    try {
      (void)Cholesky(a, 1e-13);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.category() == ErrorCategory::degenerate);
    }
  }
}

TEST_CASE("V-cycle fixed point, base case and linearity") {
  auto gen = oracle::rng(8);
  const Hierarchy h = poisson_hierarchy(4);
  const MGLevelStack& stack = h.stack();
  for (int k = 0; k < stack.num_levels(); ++k) {
    const Vector xs = random_vector(stack.size(k), gen);
    const Vector b = multiply(stack.stiffness(k), xs);
    CHECK(oracle::max_abs_diff(v_cycle(stack, k, b, xs), xs) <= 1e-12);
  }
  const Vector b0 = random_vector(stack.size(0), gen);
  const Vector direct = oracle::direct_solve(stack.stiffness(0), b0);
  CHECK(oracle::max_abs_diff(v_cycle(stack, 0, b0, Vector(stack.size(0), 5.0)), direct) <= 1e-13);

  const int k = 3;
  const Vector b = random_vector(stack.size(k), gen);
  const Vector x = random_vector(stack.size(k), gen);
  const double alpha = -2.75;
  const Vector lhs = v_cycle(stack, k, alpha * b, alpha * x);
  const Vector rhs = alpha * v_cycle(stack, k, b, x);
  CHECK(oracle::max_abs_diff(lhs, rhs) <= 1e-12 * (1.0 + norm_inf(rhs)));

  CHECK_THROWS_AS((void)v_cycle(stack, k, Vector(3, 0.0), x), Error);
}

TEST_CASE("V-cycle contraction is below one half and level independent") {
  auto gen = oracle::rng(9);
  const Hierarchy h = poisson_hierarchy(7);
  const MGLevelStack& stack = h.stack();
  std::vector<double> rates;
  for (int k = 2; k <= 6; ++k) {
    const CsrMatrix& a = stack.stiffness(k);
    const Vector b = random_vector(stack.size(k), gen);
    const Vector exact = oracle::direct_solve(a, b);
    Vector x = random_vector(stack.size(k), gen);
    double worst = 0.0;
    for (int cycle = 0; cycle < 4; ++cycle) {
      const double before = oracle::a_norm(a, oracle::diff(x, exact));
      x = v_cycle(stack, k, b, x);
      worst = std::max(worst, oracle::a_norm(a, oracle::diff(x, exact)) / before);
    }
    MESSAGE("level " << k + 1 << " contraction " << worst);
    CHECK(worst <= 0.5);
    rates.push_back(worst);
  }
  // The rate saturates once the coarse grid stops resolving the error.
  CHECK(std::abs(rates[rates.size() - 1] - rates[rates.size() - 2]) <= 0.02);
}

TEST_CASE("m V-cycles") {
  auto gen = oracle::rng(10);
  const Hierarchy h = poisson_hierarchy(5);
  const MGLevelStack& stack = h.stack();
  const int k = 4;
  const CsrMatrix& a = stack.stiffness(k);
  const Vector b = random_vector(stack.size(k), gen);
  const Vector x0 = random_vector(stack.size(k), gen);
  CHECK(mg_solve_m_steps(stack, k, b, x0, 0) == x0);
  const Vector exact = oracle::direct_solve(a, b);
  const Vector x2 = mg_solve_m_steps(stack, k, b, x0, 2);
  CHECK(oracle::a_norm(a, oracle::diff(x2, exact)) <= 0.25 * oracle::a_norm(a, oracle::diff(x0, exact)));
  CHECK(oracle::max_abs_diff(mg_solve_m_steps(stack, k, b, exact, 3), exact) <= 1e-12);
  CHECK_THROWS_AS((void)mg_solve_m_steps(stack, k, b, x0, -1), Error);
}

TEST_CASE("re-assembled coarse operators equal Galerkin products") {
  const Hierarchy h = poisson_hierarchy(5);
  for (int k = 1; k < h.num_levels(); ++k) {
    const CsrMatrix& p = h.prolongation(k);
    const Eigen::MatrixXd g = oracle::to_dense(p).transpose() * oracle::to_dense(h.stiffness(k)) * oracle::to_dense(p);
    CHECK((g - oracle::to_dense(h.stiffness(k - 1))).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("level stack rejects mismatched prolongations") {
  MGLevelStack stack;
  stack.push_level(identity_matrix(2));
  CHECK_THROWS_AS(stack.push_level(identity_matrix(4), identity_matrix(3)), Error);
}
