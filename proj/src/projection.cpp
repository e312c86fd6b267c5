#include "greencolloc/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace greencolloc {

PiecewisePolynomial project(const CollocationGrid& grid,
                            const EvaluableFunction& x) {
  PiecewisePolynomial p{grid, {}};
  p.values.reserve(grid.dimension());
  for (double tau : grid.nodes()) p.values.push_back(x(tau));
  return p;
}

EvaluableFunction residual(const CollocationGrid& grid,
                           const EvaluableFunction& x) {
  auto interp = project(grid, x);
  auto fn = [x, interp](double s) { return x(s) - pp_eval(interp, s); };
  return EvaluableFunction(fn, x.kinks(), "(I-P)" + x.tag())
      .with_kinks(grid.mesh().breakpoints);
}

double sup_norm(const EvaluableFunction& g, const CollocationGrid& grid,
                int per_cell) {
  const int n = grid.cell_count();
  double best = 0.0;
  auto consider = [&](double t) {
    if (t < 0.0 || t > 1.0) return;
    best = std::max(best, std::abs(g(t)));
  };
  const int total = n * per_cell;
  for (int i = 0; i <= total; ++i) consider(static_cast<double>(i) / total);
  for (double b : grid.mesh().breakpoints) consider(b);
  for (double tau : grid.nodes()) consider(tau);
  for (double k : g.kinks()) consider(k);
  return best;
}

double residual_norm_K(const CollocationGrid& grid, const GreensKernel& kernel,
                       const EvaluableFunction& x, int q) {
  auto rho = residual(grid, x);
  auto image = apply_K_fn(kernel, rho, q);
  return sup_norm(image, grid);
}

double residual_norm_PKP(const CollocationGrid& grid,
                         const GreensKernel& kernel,
                         const EvaluableFunction& x, int q) {
  auto rho = residual(grid, x);
  auto image = apply_K_fn(kernel, rho, q);
  return sup_norm(residual(grid, image), grid);
}

double residual_norm_KPK(const CollocationGrid& grid,
                         const GreensKernel& kernel,
                         const EvaluableFunction& x, int q) {
  auto rho = residual(grid, x);
  auto inner = apply_K_fn(kernel, rho, q);
  auto outer_arg = residual(grid, inner).memoized();
  auto image = apply_K_fn(kernel, outer_arg, q);
  return sup_norm(image, grid);
}

namespace {

std::vector<ConfluentPoint> cell_points(const CollocationGrid& grid, int j,
                                        const EvaluableFunction& g) {
  std::vector<ConfluentPoint> pts;
  const int m = grid.nodes_per_cell();
  pts.reserve(m + 2);
  for (int k = 0; k < m; ++k) {
    const double tau = grid.node(j, k);
    pts.push_back({tau, g(tau), std::nullopt});
  }
  return pts;
}

void check_cell_contains(const CollocationGrid& grid, int j, double s) {
  const double lo = grid.mesh().breakpoints[j];
  const double hi = grid.mesh().breakpoints[j + 1];
  if (s < lo || s > hi) {
    throw std::invalid_argument("divided difference: s outside subinterval");
  }
}

}  // namespace

double divided_diff_over_cell(const CollocationGrid& grid, int j,
                              const EvaluableFunction& g, double s) {
  check_cell_contains(grid, j, s);
  auto pts = cell_points(grid, j, g);
  for (const auto& p : pts) {
    if (p.x == s) {
      throw std::invalid_argument(
          "divided_diff_over_cell: s coincides with a node; use the "
          "repeated-node variant");
    }
  }
  pts.push_back({s, g(s), std::nullopt});
  std::sort(pts.begin(), pts.end(),
            [](const ConfluentPoint& a, const ConfluentPoint& b) {
              return a.x < b.x;
            });
  return divided_difference(pts);
}

double divided_diff_over_cell_repeated(const CollocationGrid& grid, int j,
                                       const EvaluableFunction& g, double s,
                                       double g_prime_at_s) {
  check_cell_contains(grid, j, s);
  auto pts = cell_points(grid, j, g);
  const double gs = g(s);
  pts.push_back({s, gs, std::nullopt});
  pts.push_back({s, gs, g_prime_at_s});
  std::sort(pts.begin(), pts.end(),
            [](const ConfluentPoint& a, const ConfluentPoint& b) {
              return a.x < b.x;
            });
  return divided_difference(pts);
}

double divided_diff_K(const CollocationGrid& grid, const GreensKernel& kernel,
                      const EvaluableFunction& x, int j, double s, int q) {
  auto image = apply_K_fn(kernel, x, q);
  return divided_diff_over_cell(grid, j, image, s);
}

double divided_diff_K_repeated(const CollocationGrid& grid,
                               const GreensKernel& kernel,
                               const EvaluableFunction& x, int j, double s,
                               int q, double eps) {
  check_cell_contains(grid, j, s);
  const int m = grid.nodes_per_cell();
  double shifted = s;
  for (int k = 0; k < m; ++k) {
    if (std::abs(grid.node(j, k) - s) < 1e-12) {
      const double hi = grid.mesh().breakpoints[j + 1];
      shifted = (s + eps <= hi) ? s + eps : s - eps;
      break;
    }
  }
  auto image = apply_K_fn(kernel, x, q);
  const double slope = apply_K_ds(kernel, x, shifted, q);
  return divided_diff_over_cell_repeated(grid, j, image, shifted, slope);
}

}  // namespace greencolloc
