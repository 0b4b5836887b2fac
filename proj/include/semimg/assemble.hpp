#pragma once

#include "semimg/exec.hpp"
#include "semimg/fespace.hpp"
#include "semimg/nonlinear.hpp"
#include "semimg/quadrature.hpp"
#include "semimg/sparse.hpp"

#include <array>
#include <span>

namespace semimg {

/// Constant symmetric positive definite 2x2 diffusion matrix.
class DiffusionCoefficient {
 public:
  DiffusionCoefficient() = default;
  /// Throws invalid_argument unless symmetric positive definite.
  DiffusionCoefficient(double a11, double a12, double a21, double a22);

  static DiffusionCoefficient identity() { return {}; }

  double a11() const { return a11_; }
  double a12() const { return a12_; }
  double a22() const { return a22_; }
  /// A v
  Point apply(const Point& v) const { return {a11_ * v[0] + a12_ * v[1], a12_ * v[0] + a22_ * v[1]}; }

 private:
  double a11_ = 1.0;
  double a12_ = 0.0;
  double a22_ = 1.0;
};

using LocalMatrix = std::array<std::array<double, 3>, 3>;
using LocalVector = std::array<double, 3>;

/// Constant gradients of the three P1 basis functions on a triangle.
std::array<Point, 3> basis_gradients(const Point& p0, const Point& p1, const Point& p2);
/// Element stiffness (A grad phi_j, grad phi_i) on a triangle.
LocalMatrix local_stiffness(const Point& p0, const Point& p1, const Point& p2, const DiffusionCoefficient& a);
/// Element mass (phi_j, phi_i) computed with the given rule.
LocalMatrix local_mass(const Point& p0, const Point& p1, const Point& p2, const QuadratureRule& quad);

/// Default rule for load, reaction and mass terms (degree 4).
const QuadratureRule& default_rule();
/// Rule for error norms (degree 6).
const QuadratureRule& error_rule();

CsrMatrix assemble_stiffness(const FESpace& space, const DiffusionCoefficient& a, Exec exec = Exec::parallel);
CsrMatrix assemble_mass(const FESpace& space, const QuadratureRule& quad = default_rule(), Exec exec = Exec::parallel);
/// (g, phi_i) for every free dof.
Vector assemble_load(const FESpace& space, const ScalarField& g, const QuadratureRule& quad = default_rule(),
                     Exec exec = Exec::parallel);
/// (f(x, u_h), phi_i) for every free dof; u_h is the P1 function with nodal
/// values u. A non-finite f value throws an evaluation error naming the point.
Vector nonlinear_residual(const FESpace& space, const NonlinearTerm& f, std::span<const double> u,
                          const QuadratureRule& quad = default_rule(), Exec exec = Exec::parallel);
/// (df/du(x, u_h) phi_j, phi_i): the Jacobian of nonlinear_residual. Uses the
/// analytic derivative when present, else central differences with step
/// 1e-6 (1 + |u|).
CsrMatrix nonlinear_jacobian(const FESpace& space, const NonlinearTerm& f, std::span<const double> u,
                             const QuadratureRule& quad = default_rule(), Exec exec = Exec::parallel);

struct ErrorNorms {
  double energy = 0.0;
  double l2 = 0.0;
};

/// Energy and L2 errors of the P1 function u_h against an exact solution.
ErrorNorms error_norms(const FESpace& space, std::span<const double> u_h, const ScalarField& u_exact,
                       const GradientField& grad_exact, const DiffusionCoefficient& a,
                       const QuadratureRule& quad = error_rule(), Exec exec = Exec::parallel);

}  // namespace semimg
