#pragma once

#include <array>
#include <vector>

namespace semimg {

/// Quadrature on the reference triangle in barycentric coordinates. Weights
/// are normalized to sum to 1, so an integral over a cell K is
/// |K| * sum_q w_q f(x_q).
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Symmetric rule exact for polynomials of the given degree. Degrees 1, 2, 4
/// and 6 use the classical 1-, 3-, 6- and 12-point rules; other degrees fall
/// back to collapsed_gauss_rule.
QuadratureRule triangle_rule(int degree);

/// Conical product of Gauss-Legendre rules, n^2 points with positive weights,
/// exact to degree 2n - 2.
QuadratureRule collapsed_gauss_rule(int n);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Two-point Gauss rule on [0, 1], used for edge integrals.
const std::array<std::array<double, 2>, 2>& edge_gauss2();

}  // namespace semimg
