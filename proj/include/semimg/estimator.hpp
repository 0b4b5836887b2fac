#pragma once

#include "semimg/fmg.hpp"
#include "semimg/hierarchy.hpp"
#include "semimg/mesh.hpp"
#include "semimg/problems.hpp"

#include <memory>
#include <span>
#include <vector>

namespace semimg {

struct ErrorIndicators {
  /// Squared indicator of every cell.
  Vector eta2;
  /// sqrt of the sum of eta2.
  double total = 0.0;
};

/// Residual indicators of the P1 function u on `space`:
///   eta2_K = h_K^2 ||g - f(x, u_h)||_K^2 + sum over interior edges e of K of h_e ||[A grad u_h] . n_e||_e^2.
/// The cellwise divergence of A grad u_h vanishes for P1 with constant A.
ErrorIndicators compute_indicators(const FESpace& space, std::span<const double> u, const ProblemSpec& problem,
                                   const QuadratureRule& quad = default_rule(), Exec exec = Exec::parallel);

/// Dorfler marking: the smallest set of cells, taken in order of descending
/// eta2 with ties broken by ascending id, whose eta2 sum reaches
/// fraction^2 times the total. When every indicator is zero, the first cell
/// in that order is marked so that refinement still makes progress.
std::vector<int> dorfler_mark(const ErrorIndicators& indicators, double fraction);

struct AdaptiveStep {
  int iteration = 0;
  int n_dofs = 0;
  double eta_total = 0.0;
  /// Cumulative wall time of solve, estimate, mark and refine.
  double time_s = 0.0;
  int nonlinear_iterations = 0;
};

struct AdaptiveResult {
  std::unique_ptr<Hierarchy> hierarchy;
  /// Solution on every iteration's mesh.
  std::vector<Vector> solutions;
  std::vector<ErrorIndicators> indicators;
  std::vector<AdaptiveStep> steps;
};

/// Solve, estimate, mark and bisect `iterations` times. The first iteration
/// solves by full Newton on the base mesh; each later one prolongs the
/// previous solution and applies p correction steps on the new level.
AdaptiveResult adaptive_fmg(const ProblemSpec& problem, const Mesh& base_mesh, int iterations, double fraction,
                            const FMGConfig& config);

}  // namespace semimg
