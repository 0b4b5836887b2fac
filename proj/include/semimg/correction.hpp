#pragma once

#include "semimg/hierarchy.hpp"
#include "semimg/problems.hpp"
#include "semimg/sparse.hpp"

#include <span>

namespace semimg {

enum class NonlinearSolver { newton, fixed_point };

struct CorrectionConfig {
  /// V-cycles on the linearized problem per correction.
  int m = 2;
  NonlinearSolver solver = NonlinearSolver::newton;
  /// Stop when the reduced residual 2-norm is at most this.
  double tolerance = 1e-10;
  int max_iterations = 50;
  /// Backtracking halvings per Newton step.
  int max_halvings = 20;
  /// Relative Cholesky pivot below which the augmented basis counts as
  /// linearly dependent.
  double dependence_threshold = 1e-13;
  Exec exec = Exec::parallel;
};

void validate(const CorrectionConfig& config);

/// Coarse space plus span{linear_iterate} on level k, represented by its embedding into level k:
/// the first columns are the composed prolongation of the coarse space, the
/// last column is linear_iterate.
struct AugmentedSpace {
  CsrMatrix embedding;
  int level = 0;
  int coarse_level = 0;

  int dim() const { return embedding.n_cols; }
  /// Level-k nodal vector E c.
  Vector apply(std::span<const double> c) const { return multiply(embedding, c); }
};

/// A u + F(u) - load on the free dofs of `space`.
Vector semilinear_residual(const FESpace& space, const CsrMatrix& stiffness, const NonlinearTerm& f,
                           std::span<const double> load, std::span<const double> u, Exec exec = Exec::parallel);

/// Right side of the linearized problem a(u_hat, v) = (g, v) - (f(x, u_prev), v).
Vector linearized_rhs(const FESpace& space, std::span<const double> load, std::span<const double> u_prev,
                      const NonlinearTerm& f, Exec exec = Exec::parallel);
Vector linearized_rhs(const Hierarchy& hierarchy, int k, std::span<const double> u_prev, const ProblemSpec& problem);

/// m V-cycles on A_k x = b starting from u_prev. Deliberately inexact.
Vector approximate_linear_solve(const MGLevelStack& stack, int k, std::span<const double> b,
                                std::span<const double> u_prev, int m);

AugmentedSpace build_augmented_space(const Hierarchy& hierarchy, int k, std::span<const double> linear_iterate);

struct ReducedSolution {
  /// Level-k iterate E c.
  Vector u;
  Vector coefficients;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Solves the semilinear problem on the augmented space. All integrals are
/// taken on level k through the embedding E:
///   R(c) = E^T (A_k E c + F_k(E c) - b_k) = 0,
/// with Jacobian E^T (A_k + M_f(E c)) E, starting from c = (0, ..., 0, 1).
/// Newton steps are damped by halving until ||R|| decreases.
ReducedSolution coarse_semilinear_solve(const Hierarchy& hierarchy, const AugmentedSpace& aug,
                                        const ProblemSpec& problem, std::span<const double> load,
                                        const CorrectionConfig& config);
ReducedSolution coarse_semilinear_solve(const Hierarchy& hierarchy, const AugmentedSpace& aug,
                                        const ProblemSpec& problem, const CorrectionConfig& config);

struct CorrectionResult {
  Vector u;
  int nonlinear_iterations = 0;
  double reduced_residual = 0.0;
  /// linear_iterate, the multigrid approximation of the linearized problem.
  Vector linear_iterate;
};

/// One correction step on level k: linearize at current, apply m V-cycles
/// from current, then solve the semilinear problem on V_H + span{linear_iterate}.
/// `load` may be empty, in which case it is assembled here.
CorrectionResult one_correction_step(const Hierarchy& hierarchy, int k, std::span<const double> current,
                                     const ProblemSpec& problem, const CorrectionConfig& config,
                                     std::span<const double> load = {});

}  // namespace semimg
