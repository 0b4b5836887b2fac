#include "semimg/fmg.hpp"

#include "semimg/assemble.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>

namespace semimg {

void validate(const FMGConfig& config) {
  require(config.p >= 1, ErrorCategory::invalid_argument, "fmg: p must be >= 1");
  require(config.coarsest_tolerance > 0.0, ErrorCategory::invalid_argument,
          "fmg: coarsest tolerance must be positive");
  validate(config.correction);
}

namespace {

using LinearSolve = std::function<Vector(const CsrMatrix& jacobian, std::span<const double> rhs)>;

CsrMatrix add_same_pattern(CsrMatrix a, const CsrMatrix& b) {
  for (std::size_t p = 0; p < a.values.size(); ++p) a.values[p] += b.values[p];
  return a;
}

NewtonResult damped_newton(const FESpace& space, const CsrMatrix& a, const NonlinearTerm& f,
                           std::span<const double> load, Vector u, const NewtonOptions& options,
                           const LinearSolve& solve, const std::string& who) {
  require(options.tolerance > 0.0 && options.max_iterations >= 1 && options.max_halvings >= 0,
          ErrorCategory::invalid_argument, who + ": bad Newton options");
  NewtonResult result;
  Vector r = semilinear_residual(space, a, f, load, u, options.exec);
  double norm = norm2(r);
  while (norm > options.tolerance) {
    if (result.iterations >= options.max_iterations) {
      throw ConvergenceError(who + ": no convergence after " + std::to_string(result.iterations) +
                                 " iterations, residual " + std::to_string(norm),
                             norm);
    }
    ++result.iterations;
    const CsrMatrix jac = f.is_zero() ? a : add_same_pattern(a, nonlinear_jacobian(space, f, u, default_rule(),
                                                                                   options.exec));
    const Vector step = solve(jac, r);
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= options.max_halvings; ++halving, t *= 0.5) {
      Vector trial = u;
      axpy(-t, step, trial);
      Vector r_trial = semilinear_residual(space, a, f, load, trial, options.exec);
      const double n_trial = norm2(r_trial);
      if (n_trial < norm || n_trial <= options.tolerance) {
        u = std::move(trial);
        r = std::move(r_trial);
        norm = n_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) throw ConvergenceError(who + ": line search failed at residual " + std::to_string(norm), norm);
  }
  result.u = std::move(u);
  result.residual_norm = norm;
  return result;
}

Vector dense_solve(const CsrMatrix& jacobian, std::span<const double> rhs) {
  return Cholesky(DenseMatrix::from_sparse(jacobian)).solve(rhs);
}

Vector sparse_direct_solve(const CsrMatrix& jacobian, std::span<const double> rhs) {
  const int n = jacobian.n_rows;
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(n, n);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(jacobian.values.size());
  for (int i = 0; i < n; ++i) {
    for (int p = jacobian.row_offsets[i]; p < jacobian.row_offsets[i + 1]; ++p) {
      entries.emplace_back(i, jacobian.col_indices[p], jacobian.values[p]);
    }
  }
  m.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseMatrix<double> column_major(m);
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(column_major);
  require(llt.info() == Eigen::Success, ErrorCategory::singular, "sparse Cholesky: matrix is not positive definite");
  const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n);
  const Eigen::VectorXd x = llt.solve(b);
  return Vector(x.data(), x.data() + n);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

NewtonResult solve_coarsest(const Hierarchy& hierarchy, const ProblemSpec& problem, NewtonOptions options) {
  const FESpace& space = hierarchy.space(0);
  require(space.num_free() > 0, ErrorCategory::precondition, "solve_coarsest: coarsest space has no free dofs");
  const Vector load = assemble_load(space, problem.source, default_rule(), options.exec);
  return damped_newton(space, hierarchy.stiffness(0), problem.nonlinear, load, Vector(space.num_free(), 0.0), options,
                       dense_solve, "solve_coarsest");
}

NewtonResult newton_reference_solve(const Hierarchy& hierarchy, int level, const ProblemSpec& problem,
                                    NewtonOptions options, std::span<const double> initial) {
  require(level >= 0 && level < hierarchy.num_levels(), ErrorCategory::invalid_argument,
          "newton_reference_solve: level " + std::to_string(level) + " outside the hierarchy");
  const FESpace& space = hierarchy.space(level);
  require(initial.empty() || static_cast<int>(initial.size()) == space.num_free(), ErrorCategory::invalid_argument,
          "newton_reference_solve: initial guess does not live on level " + std::to_string(level));
  const Vector load = assemble_load(space, problem.source, default_rule(), options.exec);
  Vector u0 = initial.empty() ? Vector(space.num_free(), 0.0) : Vector(initial.begin(), initial.end());
  return damped_newton(space, hierarchy.stiffness(level), problem.nonlinear, load, std::move(u0), options,
                       sparse_direct_solve, "newton_reference_solve");
}

FmgResult full_multigrid(const Hierarchy& hierarchy, const ProblemSpec& problem, const FMGConfig& config,
                         int last_level) {
  validate(config);
  const int last = last_level < 0 ? hierarchy.finest() : last_level;
  require(last < hierarchy.num_levels(), ErrorCategory::invalid_argument,
          "full_multigrid: last level " + std::to_string(last) + " outside the hierarchy");
  const Exec exec = config.correction.exec;

  FmgResult result;
  RunRecord& record = result.record;
  double cumulative = 0.0;

  auto finish_level = [&](int k, double elapsed, int iterations) {
    LevelRecord row;
    row.level = k;
    row.n_dofs = hierarchy.num_free(k);
    row.time_s = elapsed;
    cumulative += elapsed;
    row.cumulative_time_s = cumulative;
    row.nonlinear_iterations = iterations;
    if (problem.exact) {
      const ErrorNorms e = error_norms(hierarchy.space(k), result.iterates.back(), problem.exact->u,
                                       problem.exact->grad, problem.diffusion, error_rule(), exec);
      row.energy_error = e.energy;
      row.l2_error = e.l2;
    }
    record.levels.push_back(row);
  };

  auto guarded = [&](int k, auto&& body) {
    try {
      body();
    } catch (const FmgError&) {
      throw;
    } catch (const Error& e) {
      throw FmgError(e.category(), "level " + std::to_string(k) + ": " + e.what(), record);
    }
  };

  for (int k = 0; k <= last; ++k) {
    guarded(k, [&] {
      NewtonOptions newton{config.coarsest_tolerance, config.correction.max_iterations, config.correction.max_halvings,
                           exec};
      const auto start = std::chrono::steady_clock::now();
      if (k == 0) {
        NewtonResult coarse = solve_coarsest(hierarchy, problem, newton);
        result.iterates.push_back(std::move(coarse.u));
        finish_level(k, seconds_since(start), coarse.iterations);
        return;
      }
      Vector u = hierarchy.prolongate(result.iterates.back(), k - 1, k);
      if (k <= hierarchy.coarse_index()) {
        NewtonResult full = newton_reference_solve(hierarchy, k, problem, newton, u);
        result.iterates.push_back(std::move(full.u));
        finish_level(k, seconds_since(start), full.iterations);
        return;
      }
      const Vector load = assemble_load(hierarchy.space(k), problem.source, default_rule(), exec);
      const CsrMatrix& a = hierarchy.stiffness(k);
      const double before = norm2(semilinear_residual(hierarchy.space(k), a, problem.nonlinear, load, u, exec));
      int iterations = 0;
      for (int step = 0; step < config.p; ++step) {
        CorrectionResult c = one_correction_step(hierarchy, k, u, problem, config.correction, load);
        iterations += c.nonlinear_iterations;
        u = std::move(c.u);
      }
      const double elapsed = seconds_since(start);
      if (config.detect_divergence) {
        const double after = norm2(semilinear_residual(hierarchy.space(k), a, problem.nonlinear, load, u, exec));
        if (after > before && after > 1e-8 * std::max(1.0, norm2(load))) {
          throw FmgError(ErrorCategory::convergence,
                         "level " + std::to_string(k) + ": residual grew from " + std::to_string(before) + " to " +
                             std::to_string(after) + " (coarse mesh too coarse)",
                         record);
        }
      }
      result.iterates.push_back(std::move(u));
      finish_level(k, elapsed, iterations);
    });
  }
  return result;
}

}  // namespace semimg
