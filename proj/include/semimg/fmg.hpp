#pragma once

#include "semimg/correction.hpp"
#include "semimg/error.hpp"
#include "semimg/hierarchy.hpp"
#include "semimg/problems.hpp"
#include "semimg/sparse.hpp"

#include <limits>
#include <span>
#include <vector>

namespace semimg {

struct FMGConfig {
  /// Correction steps per level.
  int p = 1;
  /// Residual 2-norm target of the Newton solve on the coarsest level.
  double coarsest_tolerance = 1e-12;
  CorrectionConfig correction;
  /// Abort when a level ends with a larger residual than it started with.
  bool detect_divergence = true;
};

void validate(const FMGConfig& config);

struct LevelRecord {
  int level = 0;
  int n_dofs = 0;
  double time_s = 0.0;
  double cumulative_time_s = 0.0;
  /// Newton iterations on the coarsest level, reduced nonlinear iterations
  /// summed over the correction steps elsewhere.
  int nonlinear_iterations = 0;
  double energy_error = std::numeric_limits<double>::quiet_NaN();
  double l2_error = std::numeric_limits<double>::quiet_NaN();
};

struct RunRecord {
  std::vector<LevelRecord> levels;
  /// Hierarchy construction time, reported apart from the solve.
  double setup_time_s = 0.0;
};

struct NewtonOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
  int max_halvings = 30;
  Exec exec = Exec::parallel;
};

struct NewtonResult {
  Vector u;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Damped Newton on level 0 with dense linear algebra, from a zero guess.
NewtonResult solve_coarsest(const Hierarchy& hierarchy, const ProblemSpec& problem, NewtonOptions options = {});

/// Damped Newton on level k with sparse direct inner solves; the discrete
/// solution used as ground truth. Starts from `initial` when given, else zero.
NewtonResult newton_reference_solve(const Hierarchy& hierarchy, int level, const ProblemSpec& problem,
                                    NewtonOptions options = {}, std::span<const double> initial = {});

struct FmgResult {
  /// Iterate on every level that was processed, coarsest first.
  std::vector<Vector> iterates;
  RunRecord record;

  const Vector& finest() const { return iterates.back(); }
};

/// Raised when the level loop stops early. Carries the record of the levels
/// finished before the failure.
class FmgError : public Error {
 public:
  FmgError(ErrorCategory category, const std::string& what, RunRecord record)
      : Error(category, what), record_(std::move(record)) {}
  const RunRecord& record() const { return record_; }

 private:
  RunRecord record_;
};

/// Newton on the coarsest level, then for each finer level prolong the
/// previous iterate and apply p correction steps. Levels up to the coarse
/// index are solved by full Newton. Errors are filled in when the problem has
/// an exact solution. `last_level` < 0 runs through the finest level.
FmgResult full_multigrid(const Hierarchy& hierarchy, const ProblemSpec& problem, const FMGConfig& config,
                         int last_level = -1);

}  // namespace semimg
