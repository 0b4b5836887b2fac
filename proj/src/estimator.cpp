#include "semimg/estimator.hpp"

#include "semimg/assemble.hpp"
#include "semimg/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

namespace semimg {

ErrorIndicators compute_indicators(const FESpace& space, std::span<const double> u, const ProblemSpec& problem,
                                   const QuadratureRule& quad, Exec exec) {
  require(static_cast<int>(u.size()) == space.num_free(), ErrorCategory::invalid_argument,
          "compute_indicators: vector does not live on the space");
  const Mesh& mesh = *space.mesh;
  const EdgeTopology topo = build_edges(mesh);
  const Vector values = expand(space, u);
  const int nc = mesh.num_cells();

  std::vector<Point> flux(nc);
  Vector volume(nc, 0.0);
  auto cell_part = [&](int c) {
    const auto& cell = mesh.cells[c];
    const Point& p0 = mesh.vertices[cell[0]];
    const Point& p1 = mesh.vertices[cell[1]];
    const Point& p2 = mesh.vertices[cell[2]];
    const auto grads = basis_gradients(p0, p1, p2);
    Point grad{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      grad[0] += values[cell[i]] * grads[i][0];
      grad[1] += values[cell[i]] * grads[i][1];
    }
    flux[c] = problem.diffusion.apply(grad);

    const double area = signed_area(mesh, c);
    double sum = 0.0;
    for (int q = 0; q < quad.size(); ++q) {
      const auto& b = quad.points[q];
      const double x = b[0] * p0[0] + b[1] * p1[0] + b[2] * p2[0];
      const double y = b[0] * p0[1] + b[1] * p1[1] + b[2] * p2[1];
      const double uq = b[0] * values[cell[0]] + b[1] * values[cell[1]] + b[2] * values[cell[2]];
      double r = problem.source(x, y);
      if (!problem.nonlinear.is_zero()) r -= problem.nonlinear(x, y, uq);
      sum += quad.weights[q] * r * r;
    }
    const double h = cell_diameter(mesh, c);
    volume[c] = h * h * area * sum;
  };
  if (exec == Exec::parallel) {
    parallel_for(nc, cell_part);
  } else {
    for (int c = 0; c < nc; ++c) cell_part(c);
  }

  // h_e ||J||_e^2 per interior edge; J is constant along the edge.
  const int ne = topo.num_edges();
  Vector jump(ne, 0.0);
  const auto& gauss = edge_gauss2();
  for (int e = 0; e < ne; ++e) {
    const auto [c0, c1] = topo.edge_cells[e];
    if (c1 < 0) continue;
    const Point& a = mesh.vertices[topo.edges[e][0]];
    const Point& b = mesh.vertices[topo.edges[e][1]];
    const double he = std::hypot(b[0] - a[0], b[1] - a[1]);
    const Point normal{(b[1] - a[1]) / he, (a[0] - b[0]) / he};
    const double j = (flux[c0][0] - flux[c1][0]) * normal[0] + (flux[c0][1] - flux[c1][1]) * normal[1];
    double integral = 0.0;
    for (const auto& [t, w] : gauss) {
      (void)t;
      integral += w * j * j;
    }
    jump[e] = he * he * integral;
  }

  ErrorIndicators ind;
  ind.eta2.resize(nc);
  double total2 = 0.0;
  for (int c = 0; c < nc; ++c) {
    double eta2 = volume[c];
    for (int k = 0; k < 3; ++k) eta2 += jump[topo.cell_edges[c][k]];
    ind.eta2[c] = eta2;
    total2 += eta2;
  }
  ind.total = std::sqrt(total2);
  return ind;
}

std::vector<int> dorfler_mark(const ErrorIndicators& indicators, double fraction) {
  require(fraction > 0.0 && fraction < 1.0, ErrorCategory::invalid_argument,
          "dorfler_mark: fraction must lie in (0, 1)");
  const auto& eta2 = indicators.eta2;
  const int n = static_cast<int>(eta2.size());
  for (int c = 0; c < n; ++c) {
    require(eta2[c] >= 0.0 && std::isfinite(eta2[c]), ErrorCategory::invalid_argument,
            "dorfler_mark: indicator of cell " + std::to_string(c) + " is negative or not finite");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return eta2[a] > eta2[b]; });

  const double sum = std::accumulate(eta2.begin(), eta2.end(), 0.0);
  // Relative slack absorbs summation-order rounding at exact ties.
  const double target = fraction * fraction * sum * (1.0 - 1e-12);
  std::vector<int> marked;
  double acc = 0.0;
  for (int c : order) {
    if (!marked.empty() && acc >= target) break;
    marked.push_back(c);
    acc += eta2[c];
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

AdaptiveResult adaptive_fmg(const ProblemSpec& problem, const Mesh& base_mesh, int iterations, double fraction,
                            const FMGConfig& config) {
  validate(config);
  require(iterations >= 0, ErrorCategory::invalid_argument, "adaptive_fmg: iterations must be >= 0");
  require(fraction > 0.0 && fraction < 1.0, ErrorCategory::invalid_argument,
          "adaptive_fmg: marking fraction must lie in (0, 1)");
  const Exec exec = config.correction.exec;
  HierarchyOptions options;
  options.exec = exec;

  AdaptiveResult result;
  result.hierarchy = std::make_unique<Hierarchy>(base_mesh, problem.diffusion, options);
  Hierarchy& h = *result.hierarchy;
  const NewtonOptions newton{config.coarsest_tolerance, config.correction.max_iterations,
                             config.correction.max_halvings, exec};

  const auto start = std::chrono::steady_clock::now();
  for (int it = 0; it < iterations; ++it) {
    const int k = h.finest();
    AdaptiveStep step;
    step.iteration = it;
    step.n_dofs = h.num_free(k);
    if (k == 0) {
      NewtonResult coarse = solve_coarsest(h, problem, newton);
      step.nonlinear_iterations = coarse.iterations;
      result.solutions.push_back(std::move(coarse.u));
    } else {
      Vector u = h.prolongate(result.solutions.back(), k - 1, k);
      const Vector load = assemble_load(h.space(k), problem.source, default_rule(), exec);
      for (int s = 0; s < config.p; ++s) {
        CorrectionResult c = one_correction_step(h, k, u, problem, config.correction, load);
        step.nonlinear_iterations += c.nonlinear_iterations;
        u = std::move(c.u);
      }
      result.solutions.push_back(std::move(u));
    }
    result.indicators.push_back(compute_indicators(h.space(k), result.solutions.back(), problem, default_rule(), exec));
    step.eta_total = result.indicators.back().total;
    if (it + 1 < iterations) {
      const std::vector<int> marked = dorfler_mark(result.indicators.back(), fraction);
      h.add_level(bisect_refine(h.mesh(k), marked));
    }
    step.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.steps.push_back(step);
  }
  return result;
}

}  // namespace semimg
