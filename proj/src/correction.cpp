#include "semimg/correction.hpp"

#include "semimg/error.hpp"
#include "semimg/multigrid.hpp"

#include <cmath>
#include <string>

namespace semimg {

void validate(const CorrectionConfig& config) {
  require(config.m >= 1, ErrorCategory::invalid_argument, "correction: m must be >= 1");
  require(config.tolerance > 0.0, ErrorCategory::invalid_argument, "correction: tolerance must be positive");
  require(config.max_iterations >= 1, ErrorCategory::invalid_argument, "correction: max_iterations must be >= 1");
  require(config.max_halvings >= 0, ErrorCategory::invalid_argument, "correction: max_halvings must be >= 0");
}

Vector semilinear_residual(const FESpace& space, const CsrMatrix& stiffness, const NonlinearTerm& f,
                           std::span<const double> load, std::span<const double> u, Exec exec) {
  Vector r = multiply(stiffness, u, exec);
  const Vector fu = nonlinear_residual(space, f, u, default_rule(), exec);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += fu[i] - load[i];
  return r;
}

Vector linearized_rhs(const FESpace& space, std::span<const double> load, std::span<const double> u_prev,
                      const NonlinearTerm& f, Exec exec) {
  require(static_cast<int>(load.size()) == space.num_free() && static_cast<int>(u_prev.size()) == space.num_free(),
          ErrorCategory::invalid_argument, "linearized_rhs: vector size does not match space");
  Vector b(load.begin(), load.end());
  const Vector fu = nonlinear_residual(space, f, u_prev, default_rule(), exec);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] -= fu[i];
  return b;
}

Vector linearized_rhs(const Hierarchy& hierarchy, int k, std::span<const double> u_prev, const ProblemSpec& problem) {
  const FESpace& space = hierarchy.space(k);
  const Vector load = assemble_load(space, problem.source, default_rule(), hierarchy.exec());
  return linearized_rhs(space, load, u_prev, problem.nonlinear, hierarchy.exec());
}

Vector approximate_linear_solve(const MGLevelStack& stack, int k, std::span<const double> b,
                                std::span<const double> u_prev, int m) {
  return mg_solve_m_steps(stack, k, b, u_prev, m);
}

AugmentedSpace build_augmented_space(const Hierarchy& hierarchy, int k, std::span<const double> linear_iterate) {
  const int coarse = hierarchy.coarse_index();
  require(k >= coarse && k < hierarchy.num_levels(), ErrorCategory::precondition,
          "build_augmented_space: level " + std::to_string(k) + " is coarser than the coarse space");
  require(static_cast<int>(linear_iterate.size()) == hierarchy.num_free(k), ErrorCategory::invalid_argument,
          "build_augmented_space: linear_iterate does not live on level " + std::to_string(k));
  const CsrMatrix& c = hierarchy.coarse_embedding(k);
  AugmentedSpace aug;
  aug.level = k;
  aug.coarse_level = coarse;
  CsrMatrix& e = aug.embedding;
  e.n_rows = c.n_rows;
  e.n_cols = c.n_cols + 1;
  e.row_offsets.assign(c.n_rows + 1, 0);
  e.col_indices.reserve(c.col_indices.size() + c.n_rows);
  e.values.reserve(c.values.size() + c.n_rows);
  for (int i = 0; i < c.n_rows; ++i) {
    for (int p = c.row_offsets[i]; p < c.row_offsets[i + 1]; ++p) {
      e.col_indices.push_back(c.col_indices[p]);
      e.values.push_back(c.values[p]);
    }
    e.col_indices.push_back(c.n_cols);
    e.values.push_back(linear_iterate[i]);
    e.row_offsets[i + 1] = static_cast<int>(e.values.size());
  }
  return aug;
}

namespace {

// E^T K E as a dense matrix.
DenseMatrix reduced_operator(const CsrMatrix& e, const CsrMatrix& et, const CsrMatrix& k) {
  return DenseMatrix::from_sparse(multiply(et, multiply(k, e)));
}

CsrMatrix add_same_pattern(CsrMatrix a, const CsrMatrix& b) {
  for (std::size_t p = 0; p < a.values.size(); ++p) a.values[p] += b.values[p];
  return a;
}

}  // namespace

ReducedSolution coarse_semilinear_solve(const Hierarchy& hierarchy, const AugmentedSpace& aug,
                                        const ProblemSpec& problem, std::span<const double> load,
                                        const CorrectionConfig& config) {
  validate(config);
  const int k = aug.level;
  const FESpace& space = hierarchy.space(k);
  const CsrMatrix& a = hierarchy.stiffness(k);
  const NonlinearTerm& f = problem.nonlinear;
  const Exec exec = config.exec;
  require(static_cast<int>(load.size()) == space.num_free(), ErrorCategory::invalid_argument,
          "coarse_semilinear_solve: load does not live on level " + std::to_string(k));
  const CsrMatrix& e = aug.embedding;
  const CsrMatrix et = transpose(e);

  auto reduced_residual = [&](std::span<const double> u) {
    return multiply(et, semilinear_residual(space, a, f, load, u, exec), exec);
  };

  ReducedSolution sol;
  sol.coefficients.assign(aug.dim(), 0.0);
  sol.coefficients.back() = 1.0;
  sol.u = aug.apply(sol.coefficients);
  Vector r = reduced_residual(sol.u);
  double norm = norm2(r);

  // The linear part of the reduced operator does not change between iterations.
  const DenseMatrix reduced_a =
      config.solver == NonlinearSolver::fixed_point ? reduced_operator(e, et, a) : DenseMatrix{};
  const Cholesky fixed_point_factor =
      config.solver == NonlinearSolver::fixed_point ? Cholesky(reduced_a, config.dependence_threshold) : Cholesky{};

  while (norm > config.tolerance) {
    if (sol.iterations >= config.max_iterations) {
      throw ConvergenceError("coarse_semilinear_solve: no convergence after " + std::to_string(sol.iterations) +
                                 " iterations, residual " + std::to_string(norm),
                             norm);
    }
    ++sol.iterations;

    if (config.solver == NonlinearSolver::fixed_point) {
      // E^T A E c_new = E^T (b - F(E c))
      const Vector fu = nonlinear_residual(space, f, sol.u, default_rule(), exec);
      Vector rhs(load.begin(), load.end());
      for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= fu[i];
      sol.coefficients = fixed_point_factor.solve(multiply(et, rhs, exec));
      sol.u = aug.apply(sol.coefficients);
      r = reduced_residual(sol.u);
      norm = norm2(r);
      continue;
    }

    const CsrMatrix jac = add_same_pattern(a, nonlinear_jacobian(space, f, sol.u, default_rule(), exec));
    const Cholesky factor(reduced_operator(e, et, jac), config.dependence_threshold);
    const Vector step = factor.solve(r);

    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= config.max_halvings; ++halving, t *= 0.5) {
      Vector trial = sol.coefficients;
      axpy(-t, step, trial);
      Vector u_trial = aug.apply(trial);
      Vector r_trial = reduced_residual(u_trial);
      const double n_trial = norm2(r_trial);
      if (n_trial < norm || n_trial <= config.tolerance) {
        sol.coefficients = std::move(trial);
        sol.u = std::move(u_trial);
        r = std::move(r_trial);
        norm = n_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw ConvergenceError("coarse_semilinear_solve: line search failed at residual " + std::to_string(norm), norm);
    }
  }
  sol.residual_norm = norm;
  return sol;
}

ReducedSolution coarse_semilinear_solve(const Hierarchy& hierarchy, const AugmentedSpace& aug,
                                        const ProblemSpec& problem, const CorrectionConfig& config) {
  const Vector load = assemble_load(hierarchy.space(aug.level), problem.source, default_rule(), config.exec);
  return coarse_semilinear_solve(hierarchy, aug, problem, load, config);
}

CorrectionResult one_correction_step(const Hierarchy& hierarchy, int k, std::span<const double> current,
                                     const ProblemSpec& problem, const CorrectionConfig& config,
                                     std::span<const double> load) {
  validate(config);
  const FESpace& space = hierarchy.space(k);
  require(static_cast<int>(current.size()) == space.num_free(), ErrorCategory::invalid_argument,
          "one_correction_step: iterate does not live on level " + std::to_string(k));
  Vector own_load;
  if (load.empty()) {
    own_load = assemble_load(space, problem.source, default_rule(), config.exec);
    load = own_load;
  }
  const Vector b = linearized_rhs(space, load, current, problem.nonlinear, config.exec);
  CorrectionResult result;
  result.linear_iterate = approximate_linear_solve(hierarchy.stack(), k, b, current, config.m);
  const AugmentedSpace aug = build_augmented_space(hierarchy, k, result.linear_iterate);
  ReducedSolution reduced = coarse_semilinear_solve(hierarchy, aug, problem, load, config);
  result.u = std::move(reduced.u);
  result.nonlinear_iterations = reduced.iterations;
  result.reduced_residual = reduced.residual_norm;
  return result;
}

}  // namespace semimg
