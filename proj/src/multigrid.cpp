#include "semimg/multigrid.hpp"

#include "semimg/error.hpp"

#include <algorithm>
#include <string>

namespace semimg {

void MGLevelStack::push_level(CsrMatrix stiffness, CsrMatrix prolongation) {
  require(stiffness.n_rows == stiffness.n_cols, ErrorCategory::invalid_argument, "push_level: stiffness not square");
  Level level;
  if (levels_.empty()) {
    coarse_ = Cholesky(DenseMatrix::from_sparse(stiffness));
  } else {
    require(prolongation.n_rows == stiffness.n_rows && prolongation.n_cols == levels_.back().stiffness.n_rows,
            ErrorCategory::invalid_argument,
            "push_level: prolongation is " + std::to_string(prolongation.n_rows) + "x" +
                std::to_string(prolongation.n_cols) + ", levels are " + std::to_string(stiffness.n_rows) + " and " +
                std::to_string(levels_.back().stiffness.n_rows));
    level.restriction = transpose(prolongation);
    level.prolongation = std::move(prolongation);
  }
  level.stiffness = std::move(stiffness);
  levels_.push_back(std::move(level));
}

Vector MGLevelStack::coarse_solve(std::span<const double> b) const { return coarse_.solve(b); }

void MGLevelStack::v_cycle(int k, std::span<const double> b, std::span<double> x) const {
  require(k >= 0 && k < num_levels(), ErrorCategory::invalid_argument, "v_cycle: level out of range");
  const Level& level = levels_[k];
  require(static_cast<int>(b.size()) == level.stiffness.n_rows && static_cast<int>(x.size()) == level.stiffness.n_rows,
          ErrorCategory::invalid_argument, "v_cycle: vector size does not match level " + std::to_string(k));
  if (k == 0) {
    const Vector sol = coarse_.solve(b);
    std::copy(sol.begin(), sol.end(), x.begin());
    return;
  }
  gauss_seidel(level.stiffness, b, x, smoother_.nu_pre, SweepOrder::forward);
  const Vector r = residual(level.stiffness, b, x);
  const Vector rc = multiply(level.restriction, r);
  Vector ec(rc.size(), 0.0);
  v_cycle(k - 1, rc, ec);
  const Vector e = multiply(level.prolongation, ec);
  axpy(1.0, e, x);
  gauss_seidel(level.stiffness, b, x, smoother_.nu_post, SweepOrder::backward);
}

Vector v_cycle(const MGLevelStack& stack, int k, std::span<const double> b, std::span<const double> x) {
  Vector out(x.begin(), x.end());
  stack.v_cycle(k, b, out);
  return out;
}

Vector mg_solve_m_steps(const MGLevelStack& stack, int k, std::span<const double> b, std::span<const double> x0, int m) {
  require(m >= 0, ErrorCategory::invalid_argument, "mg_solve_m_steps: m must be >= 0");
  Vector x(x0.begin(), x0.end());
  for (int i = 0; i < m; ++i) stack.v_cycle(k, b, x);
  return x;
}

}  // namespace semimg
