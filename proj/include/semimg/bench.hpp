#pragma once

#include "semimg/estimator.hpp"
#include "semimg/fmg.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace semimg {

struct BenchConfig {
  std::string problem = "example1";
  int levels = 5;
  /// Base mesh cells per unit length.
  int base = 4;
  int m = 2;
  int p = 1;
  /// 1-based level of the coarse space.
  int coarse_index = 1;
  bool adaptive = false;
  double theta_mark = 0.5;
  int iterations = 15;
  std::string output;
  std::uint64_t seed = 0;
  /// Single-threaded kernels when set.
  bool serial = false;
};

/// Throws invalid_argument on out-of-range fields.
void validate(const BenchConfig& config);

/// Applies `key = value` lines on top of `config`. Keys match the CLI option
/// names (problem, levels, base, m, p, coarse-index, adaptive, iters,
/// theta-mark, out, seed, serial); '#' starts a comment.
BenchConfig parse_config(std::istream& in, BenchConfig config = {});
BenchConfig load_config(const std::string& path, BenchConfig config = {});

enum class ColumnKind { integer, real, time };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::real;
};

struct CsvTable {
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
};

/// Integers verbatim, reals with 17 significant digits, times in seconds
/// with three decimals. Header first, every line newline-terminated.
std::string format_csv(const CsvTable& table);
/// Writes format_csv(table); throws io naming the path on failure.
void emit_csv(const CsvTable& table, const std::string& path);
/// Parses a table written by format_csv; column kinds are taken from the
/// header names when they are known, else real.
CsvTable parse_csv(std::istream& in);

/// Columns: level, n_dofs, energy_error, l2_error, level_time_s,
/// cumulative_time_s, nonlinear_iters.
std::vector<Column> uniform_columns();
/// Columns: iter, n_dofs, eta_total, time_s, nonlinear_iters.
std::vector<Column> adaptive_columns();

struct UniformRun {
  CsvTable table;
  RunRecord record;
};

/// FMG on a uniform hierarchy. Errors are measured against the exact
/// solution when one exists, else against a Newton solve one uniform
/// refinement beyond the finest level.
UniformRun run_uniform(const BenchConfig& config);
/// Same with an explicit problem; `config.problem` is ignored.
UniformRun run_uniform(const BenchConfig& config, const ProblemSpec& problem);

struct AdaptiveRun {
  CsvTable table;
  AdaptiveResult result;
};

/// Adaptive loop on the problem domain with `base` cells per unit length.
AdaptiveRun run_adaptive(const BenchConfig& config);

/// FMG options derived from a bench configuration.
FMGConfig fmg_config(const BenchConfig& config);

}  // namespace semimg
