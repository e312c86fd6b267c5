#pragma once

#include "greencolloc/function.hpp"
#include "greencolloc/kernel.hpp"
#include "greencolloc/mesh.hpp"

namespace greencolloc {

/// Interpolatory projection P_n: nodal values of x at every tau_j^k.
PiecewisePolynomial project(const CollocationGrid& grid,
                            const EvaluableFunction& x);

/// (I - P_n)x as an EvaluableFunction; kinks are the mesh breakpoints
/// merged with x's own.
EvaluableFunction residual(const CollocationGrid& grid,
                           const EvaluableFunction& x);

/// Sampled sup norm: max of |g| over `per_cell` uniform points per
/// subinterval plus all breakpoints, collocation nodes, and g's kinks.
double sup_norm(const EvaluableFunction& g, const CollocationGrid& grid,
                int per_cell = 50);

/// ||K(I - P_n)x||_inf (sampled).
double residual_norm_K(const CollocationGrid& grid, const GreensKernel& kernel,
                       const EvaluableFunction& x, int q = 20);

/// ||(I - P_n)K(I - P_n)x||_inf (sampled).
double residual_norm_PKP(const CollocationGrid& grid,
                         const GreensKernel& kernel,
                         const EvaluableFunction& x, int q = 20);

/// ||K(I - P_n)K(I - P_n)x||_inf (sampled).
double residual_norm_KPK(const CollocationGrid& grid,
                         const GreensKernel& kernel,
                         const EvaluableFunction& x, int q = 20);

/// Divided difference [tau_j^0, ..., tau_j^{2r}, s]g over the nodes of
/// subinterval j (0-based) and one extra point s in that subinterval;
/// s must be distinct from every node.
double divided_diff_over_cell(const CollocationGrid& grid, int j,
                              const EvaluableFunction& g, double s);

/// Same with the extra point doubled: [..., s, s]g, using g'(s).
double divided_diff_over_cell_repeated(const CollocationGrid& grid, int j,
                                       const EvaluableFunction& g, double s,
                                       double g_prime_at_s);

/// [tau_j^0, ..., tau_j^{2r}, s](Kx). Rejects s equal to a node.
double divided_diff_K(const CollocationGrid& grid, const GreensKernel& kernel,
                      const EvaluableFunction& x, int j, double s, int q = 20);

/// [tau_j^0, ..., tau_j^{2r}, s, s](Kx) with (Kx)'(s) from apply_K_ds.
/// When s coincides with a node the point multiset would carry
/// multiplicity 3; the value is then taken at s shifted by `eps`
/// (sign chosen to stay inside the subinterval).
double divided_diff_K_repeated(const CollocationGrid& grid,
                               const GreensKernel& kernel,
                               const EvaluableFunction& x, int j, double s,
                               int q = 20, double eps = 1e-5);

}  // namespace greencolloc
