#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greencolloc/function.hpp"
#include "greencolloc/kernel.hpp"
#include "greencolloc/mesh.hpp"

namespace greencolloc {

/// Dense finite-dimensional reduction; node ordering is lexicographic
/// in (j, k).
struct LinearSystem {
  int dimension = 0;
  std::vector<double> matrix;  // row-major, dimension x dimension
  std::vector<double> rhs;
};

struct LinearSolution {
  std::vector<double> coefficients;
  double condition_estimate = 0.0;
};

/// Thrown when a method fails at the current n: (numerically) singular
/// system, condition estimate above 1e12, or a reconstruction residual
/// breach.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense LU with row pivoting; condition estimated in the 1-norm by a
/// 5-step power iteration on the inverse.
LinearSolution linear_solve(const LinearSystem& sys);

enum class Method { Collocation, Iterated, Modified, IteratedModified };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct SolveResult {
  Method method = Method::Collocation;
  EvaluableFunction solution;
  std::optional<PiecewisePolynomial> nodal;
  double condition_estimate = 0.0;
  long kernel_evaluations = 0;
};

/// Collocation: nodal system c_i - sum_j (K L_j)(tau_i) c_j = f(tau_i).
SolveResult solve_collocation(const FredholmProblem& problem,
                              const CollocationGrid& grid, int q = 20);

/// One Sloan step: K phi_C + f, returned as a lazily evaluated
/// function (never re-projected).
SolveResult iterate(const FredholmProblem& problem, const SolveResult& result,
                    int q = 20);

/// Modified collocation via the nodal reduction in u = P_n phi:
/// (I - A - B) u = P_n f + P_n K (I - P_n) f with A[i][j] = (K L_j)(tau_i)
/// and B[i][j] = (K (I - P_n) K L_j)(tau_i); the full solution is
/// reconstructed as u + (I - P_n) f + (I - P_n) K u. When `verify` is
/// set, the operator-equation residual is sampled at 101 points and a
/// breach beyond 1e-8 raises SolverFailure.
SolveResult solve_modified(const FredholmProblem& problem,
                           const CollocationGrid& grid, int q = 20,
                           bool verify = true);

/// One iteration step on the modified solution: K phi_M + f.
SolveResult iterate_modified(const FredholmProblem& problem,
                             const SolveResult& result, int q = 20);

/// (K L_{j,k})(s) for the local Lagrange basis function of node (j, k).
double basis_image(const GreensKernel& kernel, const CollocationGrid& grid,
                   int j, int k, double s, int q = 20);

}  // namespace greencolloc
