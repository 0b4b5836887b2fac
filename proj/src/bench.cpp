#include "semimg/bench.hpp"

#include "semimg/assemble.hpp"
#include "semimg/error.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace semimg {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  require(ec == std::errc{} && ptr == end, ErrorCategory::invalid_argument,
          "config: bad value '" + text + "' for key '" + key + "'");
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  fail(ErrorCategory::invalid_argument, "config: bad boolean '" + text + "' for key '" + key + "'");
}

std::string format_cell(double v, ColumnKind kind) {
  char buf[64];
  switch (kind) {
    case ColumnKind::integer:
      std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
      break;
    case ColumnKind::time:
      std::snprintf(buf, sizeof buf, "%.3f", v);
      break;
    case ColumnKind::real:
      std::snprintf(buf, sizeof buf, "%.17g", v);
      break;
  }
  return buf;
}

ColumnKind known_kind(const std::string& name) {
  for (const auto& list : {uniform_columns(), adaptive_columns()}) {
    for (const Column& c : list) {
      if (c.name == name) return c.kind;
    }
  }
  return ColumnKind::real;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void validate(const BenchConfig& config) {
  (void)problem_by_name(config.problem);
  require(config.levels >= 2 && config.levels <= 10, ErrorCategory::invalid_argument,
          "levels must lie in [2, 10], got " + std::to_string(config.levels));
  require(config.base >= 1, ErrorCategory::invalid_argument, "base must be >= 1");
  require(config.m >= 1 && config.m <= 10, ErrorCategory::invalid_argument,
          "m must lie in [1, 10], got " + std::to_string(config.m));
  require(config.p >= 1 && config.p <= 5, ErrorCategory::invalid_argument,
          "p must lie in [1, 5], got " + std::to_string(config.p));
  require(config.coarse_index >= 1 && config.coarse_index <= config.levels, ErrorCategory::invalid_argument,
          "coarse-index must lie in [1, levels]");
  require(config.theta_mark > 0.0 && config.theta_mark < 1.0, ErrorCategory::invalid_argument,
          "theta-mark must lie in (0, 1)");
  require(config.iterations >= 0, ErrorCategory::invalid_argument, "iters must be >= 0");
}

BenchConfig parse_config(std::istream& in, BenchConfig config) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCategory::invalid_argument,
            "config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "problem") config.problem = value;
    else if (key == "levels") config.levels = parse_number<int>(key, value);
    else if (key == "base") config.base = parse_number<int>(key, value);
    else if (key == "m") config.m = parse_number<int>(key, value);
    else if (key == "p") config.p = parse_number<int>(key, value);
    else if (key == "coarse-index") config.coarse_index = parse_number<int>(key, value);
    else if (key == "adaptive") config.adaptive = parse_bool(key, value);
    else if (key == "iters") config.iterations = parse_number<int>(key, value);
    else if (key == "theta-mark") config.theta_mark = parse_number<double>(key, value);
    else if (key == "out") config.output = value;
    else if (key == "seed") config.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "serial") config.serial = parse_bool(key, value);
    else fail(ErrorCategory::invalid_argument, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return config;
}

BenchConfig load_config(const std::string& path, BenchConfig config) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCategory::io, "cannot open config file " + path);
  return parse_config(in, std::move(config));
}

std::vector<Column> uniform_columns() {
  return {{"level", ColumnKind::integer},        {"n_dofs", ColumnKind::integer},
          {"energy_error", ColumnKind::real},    {"l2_error", ColumnKind::real},
          {"level_time_s", ColumnKind::time},    {"cumulative_time_s", ColumnKind::time},
          {"nonlinear_iters", ColumnKind::integer}};
}

std::vector<Column> adaptive_columns() {
  return {{"iter", ColumnKind::integer},
          {"n_dofs", ColumnKind::integer},
          {"eta_total", ColumnKind::real},
          {"time_s", ColumnKind::time},
          {"nonlinear_iters", ColumnKind::integer}};
}

std::string format_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) out += ',';
    out += table.columns[j].name;
  }
  out += '\n';
  for (const auto& row : table.rows) {
    require(row.size() == table.columns.size(), ErrorCategory::internal, "format_csv: row width mismatch");
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_cell(row[j], table.columns[j].kind);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const CsvTable& table, const std::string& path) {
  const std::string text = format_csv(table);
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCategory::io, "cannot open " + path + " for writing");
  out << text;
  out.flush();
  require(static_cast<bool>(out), ErrorCategory::io, "write to " + path + " failed");
}

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCategory::io, "parse_csv: missing header");
  {
    std::stringstream header(line);
    std::string name;
    while (std::getline(header, name, ',')) table.columns.push_back({name, known_kind(name)});
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream cells(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      require(end != cell.c_str() && *end == '\0', ErrorCategory::io, "parse_csv: bad number '" + cell + "'");
      row.push_back(v);
    }
    require(row.size() == table.columns.size(), ErrorCategory::io, "parse_csv: row width mismatch");
    table.rows.push_back(std::move(row));
  }
  return table;
}

FMGConfig fmg_config(const BenchConfig& config) {
  FMGConfig fmg;
  fmg.p = config.p;
  fmg.correction.m = config.m;
  fmg.correction.exec = config.serial ? Exec::serial : Exec::parallel;
  return fmg;
}

UniformRun run_uniform(const BenchConfig& config) {
  validate(config);
  return run_uniform(config, problem_by_name(config.problem));
}

UniformRun run_uniform(const BenchConfig& config, const ProblemSpec& problem) {
  validate(config);
  const FMGConfig fmg = fmg_config(config);
  HierarchyOptions options;
  options.coarse_index = config.coarse_index - 1;
  options.exec = fmg.correction.exec;
  const bool needs_oracle = !problem.exact.has_value();

  const auto setup_start = std::chrono::steady_clock::now();
  const Hierarchy h = build_hierarchy(problem, config.levels + (needs_oracle ? 1 : 0), config.base, options);
  const double setup = seconds_since(setup_start);

  UniformRun run;
  FmgResult result = full_multigrid(h, problem, fmg, config.levels - 1);
  result.record.setup_time_s = setup;

  if (needs_oracle) {
    const int top = config.levels;
    const Vector reference = newton_reference_solve(h, top, problem, {1e-11, 50, 30, options.exec}).u;
    const CsrMatrix mass = assemble_mass(h.space(top), default_rule(), options.exec);
    for (LevelRecord& row : result.record.levels) {
      const Vector d = h.prolongate(result.iterates[row.level], row.level, top) - reference;
      row.energy_error = energy_norm(h.stiffness(top), d);
      row.l2_error = energy_norm(mass, d);
    }
  }

  run.table.columns = uniform_columns();
  for (const LevelRecord& row : result.record.levels) {
    run.table.rows.push_back({static_cast<double>(row.level + 1), static_cast<double>(row.n_dofs), row.energy_error,
                              row.l2_error, row.time_s, row.cumulative_time_s,
                              static_cast<double>(row.nonlinear_iterations)});
  }
  run.record = std::move(result.record);
  return run;
}

AdaptiveRun run_adaptive(const BenchConfig& config) {
  validate(config);
  const ProblemSpec problem = problem_by_name(config.problem);
  AdaptiveRun run;
  run.result =
      adaptive_fmg(problem, domain_mesh(problem.domain, config.base), config.iterations, config.theta_mark,
                   fmg_config(config));
  run.table.columns = adaptive_columns();
  for (const AdaptiveStep& s : run.result.steps) {
    run.table.rows.push_back({static_cast<double>(s.iteration + 1), static_cast<double>(s.n_dofs), s.eta_total,
                              s.time_s, static_cast<double>(s.nonlinear_iterations)});
  }
  return run;
}

}  // namespace semimg
