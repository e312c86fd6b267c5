#pragma once

#include <optional>
#include <string>
#include <vector>

#include "greencolloc/kernel.hpp"
#include "greencolloc/mesh.hpp"
#include "greencolloc/solvers.hpp"

namespace greencolloc {

/// Catalog of smooth exact solutions: sin_pi, poly_cubic, exp.
const std::vector<std::pair<std::string, EvaluableFunction>>&
builtin_solutions();
const EvaluableFunction& solution_by_name(const std::string& name);

/// f = phi - K phi (memoized), with phi attached as exact_solution.
FredholmProblem manufactured_problem(const GreensKernel& kernel,
                                     const EvaluableFunction& phi, int q = 20);

struct StudyConfig {
  std::string kernel = "bvp_green";
  std::string solution = "sin_pi";
  int r = 1;
  std::vector<int> n_list = {4, 8, 16, 32, 64};
  std::vector<Method> methods = {Method::Collocation, Method::Iterated,
                                 Method::Modified, Method::IteratedModified};
  int q = 20;
  std::optional<std::vector<double>> offsets;
  unsigned long seed = 1;
};

/// Throws std::invalid_argument on violated config invariants
/// (n-list strictly increasing with each entry a multiple of the
/// previous, r <= 3, q in [5, 64]).
void validate(const StudyConfig& config);

/// Theoretical order for the method at this r: collocation 2r+1,
/// iterated 2r+2, modified 2r+2 (r >= 1) / 3 (r = 0), iterated
/// modified 2r+3 (r >= 1) / 4 (r = 0).
double target_order(Method m, int r);

struct StudyRow {
  int n = 0;
  double h = 0.0;
  double sup_error = 0.0;
  std::optional<double> eoc;  // pairwise, vs the previous n; absent on
                              // the first row, at floors, and after
                              // failures
  bool floor = false;         // error below 1e-14
  std::optional<std::string> failure;
  long kernel_evaluations = 0;
};

struct MethodSeries {
  Method method = Method::Collocation;
  double target = 0.0;
  std::vector<StudyRow> rows;
  std::optional<double> tail_slope;  // least-squares over the last 3
                                     // usable points
  bool pass = false;  // |tail_slope - target| <= 0.3
};

struct ConvergenceReport {
  StudyConfig config;
  std::vector<MethodSeries> series;
  bool all_pass = false;
};

ConvergenceReport run_study(const StudyConfig& config);

struct CounterexampleRow {
  int n = 0;
  double residual_sup = 0.0;    // ||(I - P_n) phi||
  double k_residual_sup = 0.0;  // ||K (I - P_n) phi||
  double ratio = 0.0;
  bool pass = false;
};

struct CounterexampleReport {
  std::vector<CounterexampleRow> rows;
  bool all_pass = false;
};

/// The non-superconvergence example: kernel kappa(s,t) = s, r = 0 with
/// offset 1/3, phi(s) = 4s. Checks ||K(I-P_n)phi|| = 2/(3n) and
/// ||(I-P_n)phi|| = 8/(3n) to 1e-10 and ratio >= 1/4 - 1e-10.
CounterexampleReport run_counterexample(const std::vector<int>& n_list,
                                        int q = 20);

struct ProbeSeries {
  std::string name;
  double target = 0.0;  // expected log-log slope vs h
  std::vector<int> n_list;
  std::vector<double> values;
  std::optional<double> slope;
  bool floor = false;
  bool pass = false;
};

struct ProbeReport {
  StudyConfig config;
  std::vector<ProbeSeries> series;
  bool all_pass = false;
};

/// Scaling probes for the divided-difference growth bounds (sup over
/// sampled s grows no faster than h^{-2r}), the residual-operator
/// decay rates, and the halving behavior of the doubly composed
/// residual operator on random piecewise functions.
ProbeReport run_scaling_probes(const StudyConfig& config);

/// Least-squares slope of log(values) vs log(h) over the given points;
/// nullopt when fewer than 2 usable points remain after dropping
/// values below 1e-14.
std::optional<double> fit_slope(const std::vector<int>& n_list,
                                const std::vector<double>& values);

/// Pairwise empirical order log(e1/e2) / log(n2/n1).
double eoc(double e1, double e2, int n1, int n2);

/// Random unit-sup piecewise-smooth function with jump discontinuities
/// at `pieces - 1` interior cuts; deterministic in the seed.
EvaluableFunction random_piecewise(unsigned long seed, int pieces = 12);

/// CSV rows: method,n,h,sup_error,eoc,target_order,pass.
std::string report_csv(const ConvergenceReport& report);
/// Full deterministic JSON (config echo, seed, rows, slopes, pass).
std::string report_json(const ConvergenceReport& report);
std::string report_json(const CounterexampleReport& report);
std::string report_json(const ProbeReport& report);
/// Re-emit a stored study JSON document as CSV.
std::string csv_from_json(const std::string& json_text);

}  // namespace greencolloc
