#include "semimg/problems.hpp"

#include "semimg/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace semimg {

namespace {

constexpr double pi = std::numbers::pi;

double max_abs(double lo, double hi) { return std::max(std::abs(lo), std::abs(hi)); }

ExactSolution sine_product(double k) {
  return {[k](double x, double y) { return std::sin(k * pi * x) * std::sin(k * pi * y); },
          [k](double x, double y) {
            return Point{k * pi * std::cos(k * pi * x) * std::sin(k * pi * y),
                         k * pi * std::sin(k * pi * x) * std::cos(k * pi * y)};
          }};
}

}  // namespace

NonlinearTerm signed_three_halves() {
  NonlinearTerm f;
  f.name = "sign(u)|u|^1.5";
  f.eval = [](double, double, double u) { return std::copysign(std::pow(std::abs(u), 1.5), u); };
  f.derivative = [](double, double, double u) { return 1.5 * std::sqrt(std::abs(u)); };
  f.lipschitz = [](double lo, double hi) { return 1.5 * std::sqrt(max_abs(lo, hi)); };
  return f;
}

ProblemSpec example1_2d() {
  ProblemSpec p;
  p.name = "example1";
  p.domain = Domain::unit_square;
  p.nonlinear.name = "u^3";
  p.nonlinear.eval = [](double, double, double u) { return u * u * u; };
  p.nonlinear.derivative = [](double, double, double u) { return 3.0 * u * u; };
  p.nonlinear.lipschitz = [](double lo, double hi) { return 3.0 * max_abs(lo, hi) * max_abs(lo, hi); };
  p.exact = sine_product(1.0);
  p.source = [](double x, double y) {
    const double u = std::sin(pi * x) * std::sin(pi * y);
    return 2.0 * pi * pi * u + u * u * u;
  };
  return p;
}

ProblemSpec example2_2d() {
  ProblemSpec p;
  p.name = "example2";
  p.domain = Domain::unit_square;
  p.nonlinear.name = "-exp(-u)";
  p.nonlinear.eval = [](double, double, double u) { return -std::exp(-u); };
  p.nonlinear.derivative = [](double, double, double u) { return std::exp(-u); };
  p.nonlinear.lipschitz = [](double lo, double) { return std::exp(-lo); };
  p.source = [](double, double) { return 1.0; };
  return p;
}

ProblemSpec example3_2d() {
  ProblemSpec p;
  p.name = "example3";
  p.domain = Domain::unit_square;
  p.nonlinear = signed_three_halves();
  p.exact = sine_product(2.0);
  p.source = [](double x, double y) {
    const double u = std::sin(2.0 * pi * x) * std::sin(2.0 * pi * y);
    return 8.0 * pi * pi * u + std::copysign(std::pow(std::abs(u), 1.5), u);
  };
  return p;
}

ProblemSpec example4_2d() {
  ProblemSpec p;
  p.name = "example4";
  p.domain = Domain::l_shaped;
  p.nonlinear = signed_three_halves();
  p.source = [](double, double) { return 1.0; };
  return p;
}

ProblemSpec without_nonlinearity(ProblemSpec problem) {
  problem.name += "-linear";
  problem.nonlinear = NonlinearTerm::zero();
  return problem;
}

std::vector<std::string> problem_names() { return {"example1", "example2", "example3", "example4"}; }

ProblemSpec problem_by_name(const std::string& name) {
  if (name == "example1") return example1_2d();
  if (name == "example2") return example2_2d();
  if (name == "example3") return example3_2d();
  if (name == "example4") return example4_2d();
  fail(ErrorCategory::invalid_argument, "unknown problem '" + name + "'");
}

Mesh domain_mesh(Domain domain, int n) {
  return domain == Domain::unit_square ? unit_square_mesh(n) : l_shaped_mesh(n);
}

}  // namespace semimg
