#pragma once

#include "semimg/sparse.hpp"

#include <span>
#include <vector>

namespace semimg {

struct SmootherConfig {
  int nu_pre = 2;
  int nu_post = 2;
};

/// Geometric multigrid levels for the stiffness operator. Level 0 is the
/// coarsest and is solved by dense Cholesky; level k > 0 stores the
/// prolongation from level k-1.
///
/// The stack is immutable once built; every cycle allocates its own work
/// vectors, so independent solves may share a stack across threads.
class MGLevelStack {
 public:
  MGLevelStack() = default;
  explicit MGLevelStack(SmootherConfig smoother) : smoother_(smoother) {}

  /// Appends the next finer level. `prolongation` is ignored for the first
  /// level and must map the current finest level into the new one otherwise.
  void push_level(CsrMatrix stiffness, CsrMatrix prolongation = {});

  int num_levels() const { return static_cast<int>(levels_.size()); }
  int size(int k) const { return levels_.at(k).stiffness.n_rows; }
  const CsrMatrix& stiffness(int k) const { return levels_.at(k).stiffness; }
  const CsrMatrix& prolongation(int k) const { return levels_.at(k).prolongation; }
  const SmootherConfig& smoother() const { return smoother_; }

  /// Direct solve on level 0.
  Vector coarse_solve(std::span<const double> b) const;

  /// One V-cycle on level k, updating x in place: forward Gauss-Seidel
  /// pre-smoothing, restriction of the residual with P^T, recursion,
  /// prolongation of the correction, backward Gauss-Seidel post-smoothing.
  void v_cycle(int k, std::span<const double> b, std::span<double> x) const;

 private:
  struct Level {
    CsrMatrix stiffness;
    CsrMatrix prolongation;
    CsrMatrix restriction;
  };

  SmootherConfig smoother_;
  std::vector<Level> levels_;
  Cholesky coarse_;
};

Vector v_cycle(const MGLevelStack& stack, int k, std::span<const double> b, std::span<const double> x);

/// m successive V-cycles starting from x0.
Vector mg_solve_m_steps(const MGLevelStack& stack, int k, std::span<const double> b, std::span<const double> x0, int m);

}  // namespace semimg
