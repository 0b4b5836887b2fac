#pragma once

#include "semimg/assemble.hpp"
#include "semimg/fespace.hpp"
#include "semimg/mesh.hpp"
#include "semimg/nonlinear.hpp"

#include <optional>
#include <string>
#include <vector>

namespace semimg {

enum class Domain { unit_square, l_shaped };

struct ExactSolution {
  ScalarField u;
  GradientField grad;
};

/// -div(A grad u) + f(x, u) = g in the domain, u = 0 on the boundary.
struct ProblemSpec {
  std::string name;
  Domain domain = Domain::unit_square;
  DiffusionCoefficient diffusion;
  NonlinearTerm nonlinear;
  ScalarField source;
  std::optional<ExactSolution> exact;
};

/// f = u^3, u = sin(pi x) sin(pi y) on the unit square.
ProblemSpec example1_2d();
/// f = -exp(-u), g = 1 on the unit square; no closed-form solution.
ProblemSpec example2_2d();
/// f = sign(u)|u|^{3/2}, u = sin(2 pi x) sin(2 pi y) on the unit square.
ProblemSpec example3_2d();
/// f = sign(u)|u|^{3/2}, g = 1 on the L-shaped domain; no closed-form solution.
ProblemSpec example4_2d();

/// The same problem with f replaced by 0 (the source and exact data are kept).
ProblemSpec without_nonlinearity(ProblemSpec problem);

/// Looks up example1..example4. Throws invalid_argument for other names.
ProblemSpec problem_by_name(const std::string& name);
std::vector<std::string> problem_names();

/// The odd power f(u) = sign(u)|u|^{3/2} shared by examples 3 and 4.
NonlinearTerm signed_three_halves();

/// Structured mesh of the problem domain with n cells per unit length.
Mesh domain_mesh(Domain domain, int n);

}  // namespace semimg
