#include "greencolloc/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "greencolloc/projection.hpp"
#include "greencolloc/quadrature.hpp"

namespace greencolloc {

namespace {

constexpr double kConditionLimit = 1e12;

struct LuFactors {
  int n = 0;
  std::vector<double> lu;  // row-major, L below diagonal (unit), U above
  std::vector<int> pivots;
};

LuFactors lu_factor(int n, std::vector<double> a) {
  LuFactors f{n, std::move(a), {}};
  f.pivots.resize(n);
  std::iota(f.pivots.begin(), f.pivots.end(), 0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(f.lu[static_cast<std::size_t>(col) * n + col]);
    for (int row = col + 1; row < n; ++row) {
      const double v = std::abs(f.lu[static_cast<std::size_t>(row) * n + col]);
      if (v > best) {
        best = v;
        pivot = row;
      }
    }
    if (best == 0.0) throw SolverFailure("linear_solve: singular system");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(f.lu[static_cast<std::size_t>(pivot) * n + j],
                  f.lu[static_cast<std::size_t>(col) * n + j]);
      }
      std::swap(f.pivots[pivot], f.pivots[col]);
    }
    const double diag = f.lu[static_cast<std::size_t>(col) * n + col];
    for (int row = col + 1; row < n; ++row) {
      double& m = f.lu[static_cast<std::size_t>(row) * n + col];
      m /= diag;
      if (m == 0.0) continue;
      for (int j = col + 1; j < n; ++j) {
        f.lu[static_cast<std::size_t>(row) * n + j] -=
            m * f.lu[static_cast<std::size_t>(col) * n + j];
      }
    }
  }
  return f;
}

std::vector<double> lu_solve(const LuFactors& f,
                             const std::vector<double>& b) {
  const int n = f.n;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[f.pivots[i]];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      x[i] -= f.lu[static_cast<std::size_t>(i) * n + j] * x[j];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) {
      x[i] -= f.lu[static_cast<std::size_t>(i) * n + j] * x[j];
    }
    x[i] /= f.lu[static_cast<std::size_t>(i) * n + i];
  }
  return x;
}

std::vector<double> lu_solve_transpose(const LuFactors& f,
                                       const std::vector<double>& b) {
  const int n = f.n;
  std::vector<double> y = b;
  // U^T y = b (forward), then L^T z = y (backward), then undo pivots.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      y[i] -= f.lu[static_cast<std::size_t>(j) * n + i] * y[j];
    }
    y[i] /= f.lu[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) {
      y[i] -= f.lu[static_cast<std::size_t>(j) * n + i] * y[j];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[f.pivots[i]] = y[i];
  return x;
}

double matrix_norm1(int n, const std::vector<double>& a) {
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    double col = 0.0;
    for (int i = 0; i < n; ++i) {
      col += std::abs(a[static_cast<std::size_t>(i) * n + j]);
    }
    best = std::max(best, col);
  }
  return best;
}

double norm1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

// Hager-style 1-norm estimate of the inverse, 5 power iterations.
double inverse_norm1_estimate(const LuFactors& f) {
  const int n = f.n;
  std::vector<double> x(n, 1.0 / n);
  double estimate = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    std::vector<double> y = lu_solve(f, x);
    estimate = std::max(estimate, norm1(y));
    std::vector<double> xi(n);
    for (int i = 0; i < n; ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    std::vector<double> z = lu_solve_transpose(f, xi);
    int best = 0;
    for (int i = 1; i < n; ++i) {
      if (std::abs(z[i]) > std::abs(z[best])) best = i;
    }
    double zx = 0.0;
    for (int i = 0; i < n; ++i) zx += z[i] * x[i];
    if (std::abs(z[best]) <= zx) break;
    std::fill(x.begin(), x.end(), 0.0);
    x[best] = 1.0;
  }
  return estimate;
}

double lagrange_basis(const CollocationGrid& grid, int j, int k, double t) {
  const int m = grid.nodes_per_cell();
  double basis = 1.0;
  const double xk = grid.node(j, k);
  for (int l = 0; l < m; ++l) {
    if (l == k) continue;
    const double xl = grid.node(j, l);
    basis *= (t - xl) / (xk - xl);
  }
  return basis;
}

// Matrix A[i][col] = (K L_col)(tau_i).
std::vector<double> assemble_collocation_matrix(const GreensKernel& kernel,
                                                const CollocationGrid& grid,
                                                int q) {
  const int d = grid.dimension();
  const int m = grid.nodes_per_cell();
  std::vector<double> a(static_cast<std::size_t>(d) * d);
  for (int j = 0; j < grid.cell_count(); ++j) {
    for (int k = 0; k < m; ++k) {
      const int col = grid.flatten(j, k);
      for (int i = 0; i < d; ++i) {
        a[static_cast<std::size_t>(i) * d + col] =
            basis_image(kernel, grid, j, k, grid.nodes()[i], q);
      }
    }
  }
  return a;
}

EvaluableFunction nodal_function(const PiecewisePolynomial& p,
                                 std::string tag) {
  auto fn = [p](double s) { return pp_eval(p, s); };
  return EvaluableFunction(fn, p.grid.mesh().breakpoints, std::move(tag));
}

LinearSolution solve_reduced(const CollocationGrid& grid,
                             std::vector<double> system_matrix,
                             const std::vector<double>& rhs) {
  LinearSystem sys{grid.dimension(), std::move(system_matrix), rhs};
  LinearSolution sol = linear_solve(sys);
  if (sol.condition_estimate > kConditionLimit) {
    throw SolverFailure("method failure at n = " +
                        std::to_string(grid.cell_count()) +
                        ": condition estimate " +
                        std::to_string(sol.condition_estimate));
  }
  return sol;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Collocation:
      return "collocation";
    case Method::Iterated:
      return "iterated";
    case Method::Modified:
      return "modified";
    case Method::IteratedModified:
      return "iterated_modified";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "collocation") return Method::Collocation;
  if (name == "iterated") return Method::Iterated;
  if (name == "modified") return Method::Modified;
  if (name == "iterated_modified") return Method::IteratedModified;
  throw std::invalid_argument("unknown method '" + name + "'");
}

LinearSolution linear_solve(const LinearSystem& sys) {
  const int n = sys.dimension;
  LuFactors f = lu_factor(n, sys.matrix);
  LinearSolution sol;
  sol.coefficients = lu_solve(f, sys.rhs);
  sol.condition_estimate =
      matrix_norm1(n, sys.matrix) * inverse_norm1_estimate(f);
  // Residual guard; a breach signals a factorization problem.
  double resid = 0.0, bnorm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      row += sys.matrix[static_cast<std::size_t>(i) * n + j] *
             sol.coefficients[j];
    }
    resid = std::max(resid, std::abs(row - sys.rhs[i]));
    bnorm = std::max(bnorm, std::abs(sys.rhs[i]));
  }
  if (resid > 1e-10 * (1.0 + bnorm)) {
    throw SolverFailure("linear_solve: residual " + std::to_string(resid) +
                        " exceeds tolerance");
  }
  return sol;
}

double basis_image(const GreensKernel& kernel, const CollocationGrid& grid,
                   int j, int k, double s, int q) {
  const double lo = grid.mesh().breakpoints[j];
  const double hi = grid.mesh().breakpoints[j + 1];
  auto integrand1 = [&](double t) {
    return kernel.kappa1(s, t) * lagrange_basis(grid, j, k, t);
  };
  auto integrand2 = [&](double t) {
    return kernel.kappa2(s, t) * lagrange_basis(grid, j, k, t);
  };
  if (s <= lo) return integrate_split(integrand2, lo, hi, {}, q);
  if (s >= hi) return integrate_split(integrand1, lo, hi, {}, q);
  return integrate_split(integrand1, lo, s, {}, q) +
         integrate_split(integrand2, s, hi, {}, q);
}

SolveResult solve_collocation(const FredholmProblem& problem,
                              const CollocationGrid& grid, int q) {
  auto counter = std::make_shared<long>(0);
  const GreensKernel kernel = counted_kernel(problem.kernel, counter);
  const int d = grid.dimension();
  std::vector<double> a = assemble_collocation_matrix(kernel, grid, q);
  std::vector<double> system(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      system[static_cast<std::size_t>(i) * d + j] =
          (i == j ? 1.0 : 0.0) - a[static_cast<std::size_t>(i) * d + j];
    }
  }
  std::vector<double> rhs(d);
  for (int i = 0; i < d; ++i) rhs[i] = problem.f(grid.nodes()[i]);
  LinearSolution sol = solve_reduced(grid, std::move(system), rhs);

  SolveResult result;
  result.method = Method::Collocation;
  result.nodal = PiecewisePolynomial{grid, std::move(sol.coefficients)};
  result.solution = nodal_function(*result.nodal, "phi_C");
  result.condition_estimate = sol.condition_estimate;
  result.kernel_evaluations = *counter;
  return result;
}

SolveResult iterate(const FredholmProblem& problem, const SolveResult& result,
                    int q) {
  if (result.method != Method::Collocation) {
    throw std::invalid_argument("iterate: expects a collocation result");
  }
  auto counter = std::make_shared<long>(0);
  const GreensKernel kernel = counted_kernel(problem.kernel, counter);
  const EvaluableFunction phi_c = result.solution;
  const EvaluableFunction f = problem.f;
  auto fn = [kernel, phi_c, f, q](double s) {
    return apply_K(kernel, phi_c, s, q) + f(s);
  };
  SolveResult iterated;
  iterated.method = Method::Iterated;
  iterated.solution =
      EvaluableFunction(fn, f.kinks(), "phi_S").memoized();
  iterated.condition_estimate = result.condition_estimate;
  iterated.kernel_evaluations = result.kernel_evaluations;
  return iterated;
}

SolveResult solve_modified(const FredholmProblem& problem,
                           const CollocationGrid& grid, int q, bool verify) {
  auto counter = std::make_shared<long>(0);
  const GreensKernel kernel = counted_kernel(problem.kernel, counter);
  const int d = grid.dimension();
  const int m = grid.nodes_per_cell();
  const std::vector<double>& tau = grid.nodes();
  const std::vector<double>& breakpoints = grid.mesh().breakpoints;

  std::vector<double> a = assemble_collocation_matrix(kernel, grid, q);

  // B[i][col] = (K (I - P_n) K L_col)(tau_i); columns assembled through
  // memoized basis images so abscissae shared between rows are
  // evaluated once.
  std::vector<double> b(static_cast<std::size_t>(d) * d);
  for (int j = 0; j < grid.cell_count(); ++j) {
    for (int k = 0; k < m; ++k) {
      const int col = grid.flatten(j, k);
      EvaluableFunction w =
          EvaluableFunction(
              [&kernel, &grid, j, k, q](double s) {
                return basis_image(kernel, grid, j, k, s, q);
              },
              {}, "KL")
              .memoized();
      PiecewisePolynomial w_interp = project(grid, w);
      EvaluableFunction v =
          EvaluableFunction(
              [w, w_interp](double s) { return w(s) - pp_eval(w_interp, s); },
              breakpoints, "(I-P)KL")
              .memoized();
      for (int i = 0; i < d; ++i) {
        b[static_cast<std::size_t>(i) * d + col] =
            apply_K(kernel, v, tau[i], q);
      }
    }
  }

  EvaluableFunction f_resid = residual(grid, problem.f).memoized();
  std::vector<double> rhs(d);
  for (int i = 0; i < d; ++i) {
    rhs[i] = problem.f(tau[i]) + apply_K(kernel, f_resid, tau[i], q);
  }

  std::vector<double> system(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * d + j;
      system[idx] = (i == j ? 1.0 : 0.0) - a[idx] - b[idx];
    }
  }
  LinearSolution sol = solve_reduced(grid, std::move(system), rhs);

  PiecewisePolynomial u{grid, sol.coefficients};
  EvaluableFunction u_fn = nodal_function(u, "P_n phi_M");
  PiecewisePolynomial f_interp = project(grid, problem.f);
  EvaluableFunction ku = apply_K_fn(kernel, u_fn, q);
  // (K u)(tau_i) = (A u)_i; reuse the assembled matrix for the nodal
  // interpolant of K u.
  std::vector<double> ku_nodal(d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      ku_nodal[i] +=
          a[static_cast<std::size_t>(i) * d + j] * sol.coefficients[j];
    }
  }
  PiecewisePolynomial ku_interp{grid, std::move(ku_nodal)};

  const EvaluableFunction f = problem.f;
  auto phi_m_eval = [u, f, f_interp, ku, ku_interp](double s) {
    return pp_eval(u, s) + f(s) - pp_eval(f_interp, s) + ku(s) -
           pp_eval(ku_interp, s);
  };
  EvaluableFunction phi_m =
      EvaluableFunction(phi_m_eval, f.kinks(), "phi_M")
          .with_kinks(breakpoints)
          .memoized();

  if (verify) {
    // phi_M must satisfy phi - K_n^M phi = f with
    // K_n^M phi = P_n(K phi) + K u - P_n(K u), since P_n phi_M = u.
    EvaluableFunction k_phi = apply_K_fn(kernel, phi_m, q);
    PiecewisePolynomial k_phi_interp = project(grid, k_phi);
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double s = i / 100.0;
      const double knm = pp_eval(k_phi_interp, s) + ku(s) - pp_eval(ku_interp, s);
      worst = std::max(worst, std::abs(phi_m(s) - knm - f(s)));
    }
    if (worst > 1e-8) {
      throw SolverFailure(
          "solve_modified: reconstruction residual " + std::to_string(worst) +
          " exceeds 1e-8 at n = " + std::to_string(grid.cell_count()));
    }
  }

  SolveResult result;
  result.method = Method::Modified;
  result.solution = phi_m;
  result.nodal = std::move(u);
  result.condition_estimate = sol.condition_estimate;
  result.kernel_evaluations = *counter;
  return result;
}

SolveResult iterate_modified(const FredholmProblem& problem,
                             const SolveResult& result, int q) {
  if (result.method != Method::Modified) {
    throw std::invalid_argument(
        "iterate_modified: expects a modified-collocation result");
  }
  auto counter = std::make_shared<long>(0);
  const GreensKernel kernel = counted_kernel(problem.kernel, counter);
  const EvaluableFunction phi_m = result.solution;
  const EvaluableFunction f = problem.f;
  auto fn = [kernel, phi_m, f, q](double s) {
    return apply_K(kernel, phi_m, s, q) + f(s);
  };
  SolveResult iterated;
  iterated.method = Method::IteratedModified;
  iterated.solution =
      EvaluableFunction(fn, f.kinks(), "phi_M_iter").memoized();
  iterated.condition_estimate = result.condition_estimate;
  iterated.kernel_evaluations = result.kernel_evaluations;
  return iterated;
}

}  // namespace greencolloc
