// Command-line driver: uniform FMG runs and adaptive runs, CSV output.

#include "semimg/bench.hpp"
#include "semimg/error.hpp"
#include "semimg/exec.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>

using namespace semimg;

namespace {

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::invalid_argument: return 2;
    case ErrorCategory::precondition: return 3;
    case ErrorCategory::singular: return 4;
    case ErrorCategory::evaluation: return 5;
    case ErrorCategory::convergence: return 6;
    case ErrorCategory::degenerate: return 7;
    case ErrorCategory::internal: return 8;
    case ErrorCategory::io: return 9;
  }
  return 8;
}

void write_table(const CsvTable& table, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << format_csv(table);
  } else {
    emit_csv(table, path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multigrid correction solver for semilinear elliptic problems"};
  app.require_subcommand(1);

  // Values given on the command line override the config file.
  std::string config_path;
  std::uint64_t seed = 0;
  bool serial = false;
  int threads = 0;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--seed", seed, "Seed recorded with the run");
  app.add_flag("--serial", serial, "Single-threaded kernels");
  app.add_option("--threads", threads, "OpenMP thread count (0 keeps the runtime default)")->check(CLI::NonNegativeNumber);

  BenchConfig cli;
  auto* run = app.add_subcommand("run", "Full multigrid on a uniform hierarchy");
  run->add_option("--problem", cli.problem, "example1 | example2 | example3 | example4");
  run->add_option("--levels", cli.levels, "Number of levels");
  run->add_option("--base", cli.base, "Base mesh cells per unit length");
  run->add_option("--m", cli.m, "V-cycles per correction step");
  run->add_option("--p", cli.p, "Correction steps per level");
  run->add_option("--coarse-index", cli.coarse_index, "1-based level of the coarse space");
  run->add_option("--out", cli.output, "CSV output path, '-' for stdout");

  auto* adaptive = app.add_subcommand("adaptive", "Adaptive refinement driven by the residual estimator");
  adaptive->add_option("--problem", cli.problem, "Problem name");
  adaptive->add_option("--iters", cli.iterations, "Adaptive iterations");
  adaptive->add_option("--theta-mark", cli.theta_mark, "Dorfler marking fraction in (0, 1)");
  adaptive->add_option("--base", cli.base, "Base mesh cells per unit length");
  adaptive->add_option("--m", cli.m, "V-cycles per correction step");
  adaptive->add_option("--p", cli.p, "Correction steps per iteration");
  adaptive->add_option("--out", cli.output, "CSV output path, '-' for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    BenchConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    auto* active = run->parsed() ? run : adaptive;
    auto take = [&](const char* name, auto& dst, const auto& src) {
      const CLI::Option* opt = active->get_option_no_throw(name);
      if (opt != nullptr && opt->count() > 0) dst = src;
    };
    take("--problem", config.problem, cli.problem);
    take("--levels", config.levels, cli.levels);
    take("--base", config.base, cli.base);
    take("--m", config.m, cli.m);
    take("--p", config.p, cli.p);
    take("--coarse-index", config.coarse_index, cli.coarse_index);
    take("--iters", config.iterations, cli.iterations);
    take("--theta-mark", config.theta_mark, cli.theta_mark);
    take("--out", config.output, cli.output);
    if (app.count("--seed") > 0) config.seed = seed;
    if (serial) config.serial = true;
    if (threads > 0) set_threads(threads);
    config.adaptive = adaptive->parsed();

    if (config.adaptive) {
      const AdaptiveRun result = run_adaptive(config);
      write_table(result.table, config.output);
    } else {
      const UniformRun result = run_uniform(config);
      write_table(result.table, config.output);
      std::fprintf(stderr, "setup %.3f s, solve %.3f s\n", result.record.setup_time_s,
                   result.record.levels.empty() ? 0.0 : result.record.levels.back().cumulative_time_s);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error[%s]: %s\n", std::string(to_string(e.category())).c_str(), e.what());
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error[internal]: %s\n", e.what());
    return exit_code(ErrorCategory::internal);
  }
  return 0;
}
