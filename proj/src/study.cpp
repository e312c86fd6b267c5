#include "greencolloc/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "greencolloc/projection.hpp"

namespace greencolloc {

namespace {

constexpr double kErrorFloor = 1e-14;
constexpr double kSlopeTolerance = 0.3;

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CollocationGrid study_grid(const StudyConfig& config, int n) {
  return CollocationGrid(make_mesh(n), config.r, config.offsets);
}

}  // namespace

const std::vector<std::pair<std::string, EvaluableFunction>>&
builtin_solutions() {
  static const std::vector<std::pair<std::string, EvaluableFunction>> catalog =
      [] {
        std::vector<std::pair<std::string, EvaluableFunction>> xs;
        const double pi = std::acos(-1.0);
        xs.emplace_back("sin_pi",
                        EvaluableFunction(
                            [pi](double s) { return std::sin(pi * s); }, {},
                            "sin_pi"));
        xs.emplace_back("poly_cubic",
                        EvaluableFunction(
                            [](double s) { return s * s * s + 1.0; }, {},
                            "poly_cubic"));
        xs.emplace_back("exp", EvaluableFunction(
                                   [](double s) { return std::exp(s); }, {},
                                   "exp"));
        return xs;
      }();
  return catalog;
}

const EvaluableFunction& solution_by_name(const std::string& name) {
  for (const auto& [n, fn] : builtin_solutions()) {
    if (n == name) return fn;
  }
  throw std::invalid_argument("unknown solution '" + name + "'");
}

FredholmProblem manufactured_problem(const GreensKernel& kernel,
                                     const EvaluableFunction& phi, int q) {
  auto fn = [kernel, phi, q](double s) {
    return phi(s) - apply_K(kernel, phi, s, q);
  };
  EvaluableFunction f =
      EvaluableFunction(fn, phi.kinks(), "f[" + phi.tag() + "]").memoized();
  return FredholmProblem{kernel, f, phi};
}

void validate(const StudyConfig& config) {
  if (config.r < 0 || config.r > 3) {
    throw std::invalid_argument("study config: r must lie in [0, 3]");
  }
  if (config.q < 5 || config.q > 64) {
    throw std::invalid_argument("study config: quad order must lie in [5, 64]");
  }
  if (config.n_list.empty()) {
    throw std::invalid_argument("study config: empty n list");
  }
  for (std::size_t i = 0; i < config.n_list.size(); ++i) {
    if (config.n_list[i] < 1) {
      throw std::invalid_argument("study config: n must be positive");
    }
    if (i > 0) {
      const int prev = config.n_list[i - 1];
      const int cur = config.n_list[i];
      if (cur <= prev || cur % prev != 0) {
        throw std::invalid_argument(
            "study config: n list must be strictly increasing with each "
            "entry a multiple of the previous");
      }
    }
  }
  if (config.methods.empty()) {
    throw std::invalid_argument("study config: no methods selected");
  }
  kernel_by_name(config.kernel);
  solution_by_name(config.solution);
}

double target_order(Method m, int r) {
  switch (m) {
    case Method::Collocation:
      return 2.0 * r + 1.0;
    case Method::Iterated:
      return 2.0 * r + 2.0;
    case Method::Modified:
      return r >= 1 ? 2.0 * r + 2.0 : 3.0;
    case Method::IteratedModified:
      return r >= 1 ? 2.0 * r + 3.0 : 4.0;
  }
  return 0.0;
}

double eoc(double e1, double e2, int n1, int n2) {
  return std::log(e1 / e2) / std::log(static_cast<double>(n2) / n1);
}

std::optional<double> fit_slope(const std::vector<int>& n_list,
                                const std::vector<double>& values) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n_list.size() && i < values.size(); ++i) {
    if (!(values[i] > kErrorFloor)) continue;
    xs.push_back(-std::log(static_cast<double>(n_list[i])));  // log h
    ys.push_back(std::log(values[i]));
  }
  if (xs.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

ConvergenceReport run_study(const StudyConfig& config) {
  validate(config);
  const GreensKernel& kernel = kernel_by_name(config.kernel);
  const EvaluableFunction& phi = solution_by_name(config.solution);

  ConvergenceReport report;
  report.config = config;
  for (Method m : config.methods) {
    MethodSeries series;
    series.method = m;
    series.target = target_order(m, config.r);
    report.series.push_back(std::move(series));
  }

  const bool want_collocation =
      std::count(config.methods.begin(), config.methods.end(),
                 Method::Collocation) ||
      std::count(config.methods.begin(), config.methods.end(),
                 Method::Iterated);
  const bool want_modified =
      std::count(config.methods.begin(), config.methods.end(),
                 Method::Modified) ||
      std::count(config.methods.begin(), config.methods.end(),
                 Method::IteratedModified);

  for (int n : config.n_list) {
    CollocationGrid grid = study_grid(config, n);
    FredholmProblem problem = manufactured_problem(kernel, phi, config.q);

    std::optional<SolveResult> coll, mod;
    std::string coll_error, mod_error;
    if (want_collocation) {
      try {
        coll = solve_collocation(problem, grid, config.q);
      } catch (const SolverFailure& e) {
        coll_error = e.what();
      }
    }
    if (want_modified) {
      try {
        mod = solve_modified(problem, grid, config.q);
      } catch (const SolverFailure& e) {
        mod_error = e.what();
      }
    }

    for (MethodSeries& series : report.series) {
      StudyRow row;
      row.n = n;
      row.h = grid.mesh().h;
      std::optional<SolveResult> result;
      std::string error;
      try {
        switch (series.method) {
          case Method::Collocation:
            result = coll;
            error = coll_error;
            break;
          case Method::Iterated:
            if (coll) result = iterate(problem, *coll, config.q);
            error = coll_error;
            break;
          case Method::Modified:
            result = mod;
            error = mod_error;
            break;
          case Method::IteratedModified:
            if (mod) result = iterate_modified(problem, *mod, config.q);
            error = mod_error;
            break;
        }
      } catch (const SolverFailure& e) {
        error = e.what();
      }
      if (result) {
        const EvaluableFunction approx = result->solution;
        EvaluableFunction diff(
            [phi, approx](double s) { return phi(s) - approx(s); },
            approx.kinks(), "error");
        row.sup_error = sup_norm(diff, grid);
        row.floor = row.sup_error < kErrorFloor;
        row.kernel_evaluations = result->kernel_evaluations;
      } else {
        row.failure = error.empty() ? "solver failure" : error;
      }
      series.rows.push_back(std::move(row));
    }
  }

  report.all_pass = true;
  for (MethodSeries& series : report.series) {
    // Pairwise EOCs over consecutive usable rows.
    for (std::size_t i = 1; i < series.rows.size(); ++i) {
      StudyRow& cur = series.rows[i];
      const StudyRow& prev = series.rows[i - 1];
      if (cur.failure || prev.failure || cur.floor || prev.floor) continue;
      cur.eoc = eoc(prev.sup_error, cur.sup_error, prev.n, cur.n);
    }
    // Tail slope over the last 3 usable points.
    std::vector<int> ns;
    std::vector<double> es;
    for (const StudyRow& row : series.rows) {
      if (row.failure || row.floor) continue;
      ns.push_back(row.n);
      es.push_back(row.sup_error);
    }
    if (ns.size() > 3) {
      ns.erase(ns.begin(), ns.end() - 3);
      es.erase(es.begin(), es.end() - 3);
    }
    series.tail_slope = fit_slope(ns, es);
    series.pass = series.tail_slope &&
                  std::abs(*series.tail_slope - series.target) <=
                      kSlopeTolerance;
    if (!series.pass) report.all_pass = false;
  }
  return report;
}

CounterexampleReport run_counterexample(const std::vector<int>& n_list,
                                        int q) {
  const GreensKernel& kernel = kernel_by_name("rank_one");
  EvaluableFunction phi([](double s) { return 4.0 * s; }, {}, "4s");
  CounterexampleReport report;
  report.all_pass = true;
  for (int n : n_list) {
    CollocationGrid grid(make_mesh(n), 0, std::vector<double>{1.0 / 3.0});
    CounterexampleRow row;
    row.n = n;
    row.residual_sup = sup_norm(residual(grid, phi), grid);
    row.k_residual_sup = residual_norm_K(grid, kernel, phi, q);
    row.ratio = row.k_residual_sup / row.residual_sup;
    const double expected_res = 8.0 / (3.0 * n);
    const double expected_k = 2.0 / (3.0 * n);
    row.pass = std::abs(row.residual_sup - expected_res) <= 1e-10 &&
               std::abs(row.k_residual_sup - expected_k) <= 1e-10 &&
               row.ratio >= 0.25 - 1e-10;
    if (!row.pass) report.all_pass = false;
    report.rows.push_back(row);
  }
  return report;
}

namespace {

// Sup of the divided-difference probe over 25 interior points per
// subinterval, excluding h*1e-6 neighborhoods of nodes.
double probe_sup(const CollocationGrid& grid, const GreensKernel& kernel,
                 const EvaluableFunction& x, bool repeated, int q) {
  EvaluableFunction image = apply_K_fn(kernel, x, q);
  const double h = grid.mesh().h;
  const int m = grid.nodes_per_cell();
  double best = 0.0;
  for (int j = 0; j < grid.cell_count(); ++j) {
    const double lo = grid.mesh().breakpoints[j];
    for (int i = 1; i <= 25; ++i) {
      const double s = lo + h * i / 26.0;
      bool near_node = false;
      for (int k = 0; k < m; ++k) {
        if (std::abs(grid.node(j, k) - s) < h * 1e-6) {
          near_node = true;
          break;
        }
      }
      if (near_node) continue;
      double value;
      if (repeated) {
        value = divided_diff_over_cell_repeated(grid, j, image, s,
                                                apply_K_ds(kernel, x, s, q));
      } else {
        value = divided_diff_over_cell(grid, j, image, s);
      }
      best = std::max(best, std::abs(value));
    }
  }
  return best;
}

ProbeSeries make_slope_series(std::string name, double target,
                              std::vector<int> n_list,
                              std::vector<double> values, bool lower_bound) {
  ProbeSeries series;
  series.name = std::move(name);
  series.target = target;
  series.n_list = std::move(n_list);
  series.values = std::move(values);
  series.floor = std::all_of(series.values.begin(), series.values.end(),
                             [](double v) { return v < kErrorFloor; });
  series.slope = fit_slope(series.n_list, series.values);
  if (series.floor) {
    series.pass = true;
  } else if (!series.slope) {
    series.pass = false;
  } else if (lower_bound) {
    series.pass = *series.slope >= target - kSlopeTolerance;
  } else {
    series.pass = std::abs(*series.slope - target) <= kSlopeTolerance;
  }
  return series;
}

}  // namespace

EvaluableFunction random_piecewise(unsigned long seed, int pieces) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  std::vector<double> cuts;
  for (int i = 0; i + 1 < pieces; ++i) cuts.push_back(0.05 + 0.9 * uniform());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> a, b, c;
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    a.push_back(2.0 * uniform() - 1.0);
    b.push_back(2.0 * uniform() - 1.0);
    c.push_back(2.0 * uniform() - 1.0);
  }
  auto piece_of = [cuts](double s) {
    std::size_t i = 0;
    while (i < cuts.size() && s > cuts[i]) ++i;
    return i;
  };
  auto raw = [a, b, c, piece_of](double s) {
    const std::size_t i = piece_of(s);
    return a[i] + b[i] * s + c[i] * std::sin(3.0 * s);
  };
  double sup = 0.0;
  for (int i = 0; i <= 1000; ++i) sup = std::max(sup, std::abs(raw(i / 1000.0)));
  for (double cut : cuts) sup = std::max(sup, std::abs(raw(cut)));
  if (sup == 0.0) sup = 1.0;
  auto fn = [raw, sup](double s) { return raw(s) / sup; };
  return EvaluableFunction(fn, cuts, "random_piecewise");
}

ProbeReport run_scaling_probes(const StudyConfig& config) {
  validate(config);
  const GreensKernel& kernel = kernel_by_name(config.kernel);
  const EvaluableFunction& x = solution_by_name(config.solution);
  const int r = config.r;

  ProbeReport report;
  report.config = config;

  // Divided-difference growth probes: sup may grow like h^{-2r} but no
  // faster, so the log-log slope must stay >= -2r (a lower bound).
  {
    std::vector<int> ns;
    for (int n : config.n_list) {
      if (n <= 32) ns.push_back(n);
    }
    if (ns.size() < 2) ns = {4, 8, 16, 32};
    std::vector<double> distinct_vals, repeated_vals;
    for (int n : ns) {
      CollocationGrid grid = study_grid(config, n);
      distinct_vals.push_back(probe_sup(grid, kernel, x, false, config.q));
      repeated_vals.push_back(probe_sup(grid, kernel, x, true, config.q));
    }
    report.series.push_back(make_slope_series(
        "divided_diff_distinct", -2.0 * r, ns, distinct_vals, true));
    report.series.push_back(make_slope_series(
        "divided_diff_repeated", -2.0 * r, ns, repeated_vals, true));
  }

  // Residual-operator decay probes.
  {
    const double t_k = 2.0 * r + 2.0;
    const double t_pkp = r >= 1 ? 2.0 * r + 2.0 : 3.0;
    const double t_kpk = r >= 1 ? 2.0 * r + 3.0 : 4.0;
    std::vector<double> v_k, v_pkp, v_kpk;
    for (int n : config.n_list) {
      CollocationGrid grid = study_grid(config, n);
      v_k.push_back(residual_norm_K(grid, kernel, x, config.q));
      v_pkp.push_back(residual_norm_PKP(grid, kernel, x, config.q));
      v_kpk.push_back(residual_norm_KPK(grid, kernel, x, config.q));
    }
    report.series.push_back(
        make_slope_series("residual_K", t_k, config.n_list, v_k, false));
    report.series.push_back(
        make_slope_series("residual_PKP", t_pkp, config.n_list, v_pkp, false));
    report.series.push_back(
        make_slope_series("residual_KPK", t_kpk, config.n_list, v_kpk, false));
  }

  // Halving probe for the doubly composed residual operator: on the
  // single-left-endpoint-node layout the worst case over random
  // discontinuous unit-sup functions should roughly halve per mesh
  // doubling.
  {
    const std::vector<int> ns = {8, 16, 32};
    std::vector<double> values;
    for (int n : ns) {
      CollocationGrid grid(make_mesh(n), 0, std::vector<double>{0.0});
      double worst = 0.0;
      for (int i = 0; i < 10; ++i) {
        EvaluableFunction xr = random_piecewise(config.seed * 1000003 + i);
        worst = std::max(worst,
                         residual_norm_KPK(grid, kernel, xr, config.q));
      }
      values.push_back(worst);
    }
    ProbeSeries series;
    series.name = "double_residual_halving";
    series.target = 1.0;
    series.n_list = ns;
    series.values = values;
    series.slope = fit_slope(ns, values);
    series.floor = std::all_of(values.begin(), values.end(),
                               [](double v) { return v < kErrorFloor; });
    // Fixed test functions decay at least as fast as the operator-norm
    // bound allows; the pass check is one-sided (each halving ratio at
    // most 0.8). Raw values are reported for inspection.
    series.pass = series.floor;
    if (!series.floor) {
      series.pass = true;
      for (std::size_t i = 1; i < values.size(); ++i) {
        const double ratio = values[i] / values[i - 1];
        if (ratio > 0.8) series.pass = false;
      }
    }
    report.series.push_back(std::move(series));
  }

  report.all_pass = std::all_of(report.series.begin(), report.series.end(),
                                [](const ProbeSeries& s) { return s.pass; });
  return report;
}

namespace {

json config_json(const StudyConfig& config) {
  json j;
  j["kernel"] = config.kernel;
  j["solution"] = config.solution;
  j["r"] = config.r;
  j["n_list"] = config.n_list;
  json methods = json::array();
  for (Method m : config.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  j["quad_order"] = config.q;
  if (config.offsets) {
    j["offsets"] = *config.offsets;
  } else {
    j["offsets"] = nullptr;
  }
  j["seed"] = config.seed;
  return j;
}

}  // namespace

std::string report_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "method,n,h,sup_error,eoc,target_order,pass\n";
  for (const MethodSeries& series : report.series) {
    for (const StudyRow& row : series.rows) {
      out << method_name(series.method) << ',' << row.n << ',' << fmt(row.h)
          << ',';
      if (row.failure) {
        out << "failed,";
      } else {
        out << fmt(row.sup_error) << ',';
      }
      if (row.eoc) {
        out << fmt(*row.eoc);
      } else if (row.floor) {
        out << "floor";
      }
      out << ',' << fmt(series.target) << ','
          << (series.pass ? "true" : "false") << '\n';
    }
  }
  return out.str();
}

std::string report_json(const ConvergenceReport& report) {
  json j;
  j["type"] = "study";
  j["config"] = config_json(report.config);
  json series = json::array();
  for (const MethodSeries& s : report.series) {
    json js;
    js["method"] = method_name(s.method);
    js["target_order"] = s.target;
    if (s.tail_slope) {
      js["tail_slope"] = *s.tail_slope;
    } else {
      js["tail_slope"] = nullptr;
    }
    js["pass"] = s.pass;
    json rows = json::array();
    for (const StudyRow& row : s.rows) {
      json jr;
      jr["n"] = row.n;
      jr["h"] = row.h;
      if (row.failure) {
        jr["failure"] = *row.failure;
      } else {
        jr["sup_error"] = row.sup_error;
        if (row.eoc) {
          jr["eoc"] = *row.eoc;
        } else {
          jr["eoc"] = nullptr;
        }
        jr["floor"] = row.floor;
        jr["kernel_evaluations"] = row.kernel_evaluations;
      }
      rows.push_back(std::move(jr));
    }
    js["rows"] = std::move(rows);
    series.push_back(std::move(js));
  }
  j["series"] = std::move(series);
  j["all_pass"] = report.all_pass;
  return j.dump(2) + "\n";
}

std::string report_json(const CounterexampleReport& report) {
  json j;
  j["type"] = "counterexample";
  json rows = json::array();
  for (const CounterexampleRow& row : report.rows) {
    json jr;
    jr["n"] = row.n;
    jr["residual_sup"] = row.residual_sup;
    jr["k_residual_sup"] = row.k_residual_sup;
    jr["ratio"] = row.ratio;
    jr["pass"] = row.pass;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  j["all_pass"] = report.all_pass;
  return j.dump(2) + "\n";
}

std::string report_json(const ProbeReport& report) {
  json j;
  j["type"] = "probes";
  j["config"] = config_json(report.config);
  json series = json::array();
  for (const ProbeSeries& s : report.series) {
    json js;
    js["name"] = s.name;
    js["target_slope"] = s.target;
    js["n_list"] = s.n_list;
    js["values"] = s.values;
    if (s.slope) {
      js["slope"] = *s.slope;
    } else {
      js["slope"] = nullptr;
    }
    js["floor"] = s.floor;
    js["pass"] = s.pass;
    series.push_back(std::move(js));
  }
  j["series"] = std::move(series);
  j["all_pass"] = report.all_pass;
  return j.dump(2) + "\n";
}

std::string csv_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  if (j.value("type", "") != "study") {
    throw std::invalid_argument("csv_from_json: not a study report");
  }
  std::ostringstream out;
  out << "method,n,h,sup_error,eoc,target_order,pass\n";
  for (const json& s : j.at("series")) {
    for (const json& row : s.at("rows")) {
      out << s.at("method").get<std::string>() << ','
          << row.at("n").get<long>() << ',' << fmt(row.at("h").get<double>())
          << ',';
      if (row.contains("failure")) {
        out << "failed,";
      } else {
        out << fmt(row.at("sup_error").get<double>()) << ',';
        if (!row.at("eoc").is_null()) {
          out << fmt(row.at("eoc").get<double>());
        } else if (row.value("floor", false)) {
          out << "floor";
        }
      }
      out << ',' << fmt(s.at("target_order").get<double>()) << ','
          << (s.at("pass").get<bool>() ? "true" : "false") << '\n';
    }
  }
  return out.str();
}

}  // namespace greencolloc
