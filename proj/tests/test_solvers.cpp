#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "greencolloc/projection.hpp"
#include "greencolloc/solvers.hpp"
#include "greencolloc/study.hpp"

using namespace greencolloc;

namespace {

const double kPi = std::acos(-1.0);

EvaluableFunction sin_pi() {
  return EvaluableFunction([](double t) { return std::sin(kPi * t); }, {},
                           "sin_pi");
}

FredholmProblem rank_one_linear() {
  // x - Kx = 2s with kappa = s has the solution 4s.
  return FredholmProblem{
      kernel_by_name("rank_one"),
      EvaluableFunction([](double s) { return 2.0 * s; }, {}, "2s"),
      EvaluableFunction([](double s) { return 4.0 * s; }, {}, "4s")};
}

double sup_error(const SolveResult& result, const EvaluableFunction& exact,
                 const CollocationGrid& grid) {
  const EvaluableFunction approx = result.solution;
  EvaluableFunction diff(
      [exact, approx](double s) { return exact(s) - approx(s); },
      approx.kinks(), "error");
  return sup_norm(diff, grid);
}

}  // namespace

TEST_CASE("identity system returns the right-hand side") {
  LinearSystem sys{3, {1, 0, 0, 0, 1, 0, 0, 0, 1}, {2.0, -1.0, 5.0}};
  LinearSolution sol = linear_solve(sys);
  CHECK(sol.coefficients == std::vector<double>{2.0, -1.0, 5.0});
  CHECK(sol.condition_estimate >= 1.0);
}

TEST_CASE("diagonal 2x2 system") {
  LinearSystem sys{2, {2, 0, 0, 4}, {2.0, 8.0}};
  LinearSolution sol = linear_solve(sys);
  CHECK(sol.coefficients[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sol.coefficients[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("random well-conditioned 50x50 system solves to tight residual") {
  const int n = 50;
  std::mt19937_64 rng(11);
  auto uniform = [&rng] { return (rng() >> 11) * 0x1.0p-53; };
  std::vector<double> a(n * n), b(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a[i * n + j] = (i == j ? 1.0 : 0.0) + 0.01 * (2.0 * uniform() - 1.0);
    }
    b[i] = 2.0 * uniform() - 1.0;
  }
  LinearSystem sys{n, a, b};
  LinearSolution sol = linear_solve(sys);
  double resid = 0.0, bnorm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += a[i * n + j] * sol.coefficients[j];
    resid = std::max(resid, std::abs(row - b[i]));
    bnorm = std::max(bnorm, std::abs(b[i]));
  }
  CHECK(resid <= 1e-11 * bnorm);
  CHECK(sol.condition_estimate < 10.0);
}

TEST_CASE("singular systems are rejected") {
  LinearSystem sys{2, {1, 2, 2, 4}, {1.0, 2.0}};
  CHECK_THROWS_AS(linear_solve(sys), SolverFailure);
}

TEST_CASE("condition estimate tracks an ill-conditioned diagonal") {
  LinearSystem sys{2, {1e8, 0, 0, 1e-8}, {1.0, 1.0}};
  LinearSolution sol = linear_solve(sys);
  CHECK(sol.condition_estimate >= 1e15);
}

TEST_CASE("method names round-trip") {
  for (Method m : {Method::Collocation, Method::Iterated, Method::Modified,
                   Method::IteratedModified}) {
    CHECK(method_from_name(method_name(m)) == m);
  }
  CHECK_THROWS(method_from_name("simplex"));
}

TEST_CASE("collocation is exact when the solution lies in the space") {
  FredholmProblem problem = rank_one_linear();
  CollocationGrid grid(make_mesh(4), 1);
  SolveResult result = solve_collocation(problem, grid);
  for (int j = 0; j < grid.cell_count(); ++j) {
    for (int k = 0; k < grid.nodes_per_cell(); ++k) {
      CHECK(std::abs(result.nodal->value_at(j, k) - 4.0 * grid.node(j, k)) <=
            1e-10);
    }
  }
  CHECK(result.kernel_evaluations > 0);
}

TEST_CASE("zero kernel degenerates to interpolation") {
  EvaluableFunction f = sin_pi();
  FredholmProblem problem{kernel_by_name("zero"), f, f};
  CollocationGrid grid(make_mesh(4), 1);
  SolveResult coll = solve_collocation(problem, grid);
  PiecewisePolynomial interp = project(grid, f);
  for (int i = 0; i < grid.dimension(); ++i) {
    CHECK(std::abs(coll.nodal->values[i] - interp.values[i]) <= 1e-12);
  }
  SolveResult sloan = iterate(problem, coll);
  SolveResult mod = solve_modified(problem, grid);
  SolveResult mod_it = iterate_modified(problem, mod);
  for (double s : {0.0, 0.3, 0.77, 1.0}) {
    CHECK(std::abs(sloan.solution(s) - f(s)) <= 1e-12);
    CHECK(std::abs(mod.solution(s) - f(s)) <= 1e-12);
    CHECK(std::abs(mod_it.solution(s) - f(s)) <= 1e-12);
  }
}

TEST_CASE("collocation error drops by ~2^3 per mesh doubling") {
  const GreensKernel& g = kernel_by_name("bvp_green");
  FredholmProblem problem = manufactured_problem(g, sin_pi());
  CollocationGrid g4(make_mesh(4), 1), g8(make_mesh(8), 1);
  const double e4 = sup_error(solve_collocation(problem, g4), sin_pi(), g4);
  const double e8 = sup_error(solve_collocation(problem, g8), sin_pi(), g8);
  const double rate = std::log2(e4 / e8);
  CHECK(rate > 2.5);
  CHECK(rate < 3.5);
}

TEST_CASE("Sloan iterate interpolates back to the collocation solution") {
  const GreensKernel& g = kernel_by_name("bvp_green");
  FredholmProblem problem = manufactured_problem(g, sin_pi());
  CollocationGrid grid(make_mesh(6), 1);
  SolveResult coll = solve_collocation(problem, grid);
  SolveResult sloan = iterate(problem, coll);
  for (double tau : grid.nodes()) {
    CHECK(std::abs(sloan.solution(tau) - pp_eval(*coll.nodal, tau)) <= 1e-9);
  }
}

TEST_CASE("iterate refuses non-collocation input") {
  FredholmProblem problem = rank_one_linear();
  CollocationGrid grid(make_mesh(2), 1);
  SolveResult mod = solve_modified(problem, grid);
  CHECK_THROWS(iterate(problem, mod));
  SolveResult coll = solve_collocation(problem, grid);
  CHECK_THROWS(iterate_modified(problem, coll));
}

TEST_CASE("no superconvergence on the offset-1/3 single-node layout") {
  FredholmProblem problem = rank_one_linear();
  for (int n : {4, 8, 16}) {
    CollocationGrid grid(make_mesh(n), 0, std::vector<double>{1.0 / 3.0});
    SolveResult coll = solve_collocation(problem, grid);
    SolveResult sloan = iterate(problem, coll);
    const double ec = sup_error(coll, *problem.exact_solution, grid);
    const double es = sup_error(sloan, *problem.exact_solution, grid);
    CHECK(es / ec >= 0.25 - 1e-10);
  }
}

TEST_CASE("modified method reproduces solutions in the space") {
  FredholmProblem problem = rank_one_linear();
  CollocationGrid grid(make_mesh(4), 1);
  SolveResult mod = solve_modified(problem, grid);
  for (double s : {0.0, 0.21, 0.6, 1.0}) {
    CHECK(std::abs(mod.solution(s) - 4.0 * s) <= 1e-9);
  }
}

TEST_CASE("modified method error decays at least at order 2r+2") {
  const GreensKernel& g = kernel_by_name("bvp_green");
  FredholmProblem problem = manufactured_problem(g, sin_pi());
  CollocationGrid g4(make_mesh(4), 1), g8(make_mesh(8), 1);
  const double e4 = sup_error(solve_modified(problem, g4), sin_pi(), g4);
  const double e8 = sup_error(solve_modified(problem, g8), sin_pi(), g8);
  CHECK(std::log2(e4 / e8) > 3.7);  // observed rate is ~5
}

TEST_CASE("iterated modified error decays at order 4 on the midpoint layout") {
  const GreensKernel& g = kernel_by_name("bvp_green");
  FredholmProblem problem = manufactured_problem(g, sin_pi());
  CollocationGrid g8(make_mesh(8), 0), g16(make_mesh(16), 0);
  const double e8 = sup_error(
      iterate_modified(problem, solve_modified(problem, g8)), sin_pi(), g8);
  const double e16 = sup_error(
      iterate_modified(problem, solve_modified(problem, g16)), sin_pi(), g16);
  CHECK(std::log2(e8 / e16) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("modified solution satisfies the original equation at the nodes") {
  const GreensKernel& g = kernel_by_name("bvp_green");
  FredholmProblem problem = manufactured_problem(g, sin_pi());
  CollocationGrid grid(make_mesh(6), 1);
  SolveResult mod = solve_modified(problem, grid);
  const EvaluableFunction phi_m = mod.solution;
  for (double tau : grid.nodes()) {
    const double resid = phi_m(tau) - apply_K(g, phi_m, tau) - problem.f(tau);
    CHECK(std::abs(resid) <= 1e-8);
  }
}

TEST_CASE("all four methods are exact for a solution in X_n") {
  FredholmProblem problem = rank_one_linear();
  CollocationGrid grid(make_mesh(3), 1);
  SolveResult coll = solve_collocation(problem, grid);
  SolveResult sloan = iterate(problem, coll);
  SolveResult mod = solve_modified(problem, grid);
  SolveResult mod_it = iterate_modified(problem, mod);
  for (const SolveResult* r : {&coll, &sloan, &mod, &mod_it}) {
    CHECK(sup_error(*r, *problem.exact_solution, grid) <= 1e-9);
  }
}

TEST_CASE("basis image integrates the local Lagrange function") {
  // For the single-node layout the basis function is 1 on its cell, so
  // the image at s outside the cell is the plain kernel integral.
  const GreensKernel& k = kernel_by_name("rank_one");
  CollocationGrid grid(make_mesh(4), 0);
  // integral over cell 1 = [0.25, 0.5] of s dt = 0.25 s.
  CHECK(basis_image(k, grid, 1, 0, 0.8) ==
        doctest::Approx(0.2).epsilon(1e-13));
  CHECK(basis_image(k, grid, 1, 0, 0.1) ==
        doctest::Approx(0.025).epsilon(1e-13));
}
