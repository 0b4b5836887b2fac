#include "semimg/quadrature.hpp"

#include "semimg/error.hpp"

#include <cmath>
#include <numbers>

namespace semimg {

namespace {

void add_orbit3(QuadratureRule& rule, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  rule.points.push_back({b, a, a});
  rule.points.push_back({a, b, a});
  rule.points.push_back({a, a, b});
  for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

void add_orbit6(QuadratureRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  for (const auto& p : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c}, std::array{b, c, a},
                        std::array{c, a, b}, std::array{c, b, a}}) {
    rule.points.push_back(p);
    rule.weights.push_back(w);
  }
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  require(n >= 1, ErrorCategory::invalid_argument, "gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double p = n == 1 ? x : p1;
      const double pm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = 0.5 * (1.0 - x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule collapsed_gauss_rule(int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.degree = 2 * n - 2;
  // (s, t) in [0,1]^2 -> (xi, eta) = (s, t (1 - s)), Jacobian (1 - s).
  // Reference area 1/2 is divided out.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double xi = x[i];
      const double eta = x[j] * (1.0 - x[i]);
      rule.points.push_back({1.0 - xi - eta, xi, eta});
      rule.weights.push_back(2.0 * w[i] * w[j] * (1.0 - x[i]));
    }
  }
  return rule;
}

QuadratureRule triangle_rule(int degree) {
  require(degree >= 0, ErrorCategory::invalid_argument, "triangle_rule: negative degree");
  QuadratureRule rule;
  switch (degree) {
    case 0:
    case 1:
      rule.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
      rule.weights = {1.0};
      rule.degree = 1;
      return rule;
    case 2:
      add_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
      rule.degree = 2;
      return rule;
    case 3:
    case 4:
      add_orbit3(rule, 0.44594849091596488632, 0.22338158967801146570);
      add_orbit3(rule, 0.09157621350977074346, 0.10995174365532186764);
      rule.degree = 4;
      return rule;
    case 5:
    case 6:
      add_orbit3(rule, 0.24928674517091042129, 0.11678627572637936603);
      add_orbit3(rule, 0.06308901449150222834, 0.05084490637020681692);
      add_orbit6(rule, 0.05314504984481694735, 0.31035245103378440542, 0.08285107561837357519);
      rule.degree = 6;
      return rule;
    default: {
      QuadratureRule r = collapsed_gauss_rule((degree + 3) / 2);
      r.degree = degree;
      return r;
    }
  }
}

const std::array<std::array<double, 2>, 2>& edge_gauss2() {
  static const double d = 0.5 / std::sqrt(3.0);
  static const std::array<std::array<double, 2>, 2> rule{{{0.5 - d, 0.5}, {0.5 + d, 0.5}}};
  return rule;
}

}  // namespace semimg
