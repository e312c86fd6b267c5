// convlab: convergence laboratory for second-kind Fredholm equations
// with Green's-function-type kernels. Subcommands run a single solve,
// a full order-of-convergence study, operator scaling probes, and the
// non-superconvergence example with exact reference values.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "greencolloc/projection.hpp"
#include "greencolloc/study.hpp"

using namespace greencolloc;

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(method_from_name(item));
  }
  return out;
}

// Plain key=value file mirroring StudyConfig; '#' starts a comment.
void load_config_file(const std::string& path, StudyConfig& config) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("config", "cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError(
          "config", path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "kernel") {
      config.kernel = value;
    } else if (key == "solution") {
      config.solution = value;
    } else if (key == "r") {
      config.r = std::stoi(value);
    } else if (key == "n_list") {
      config.n_list = parse_int_list(value);
    } else if (key == "methods") {
      config.methods = parse_methods(value);
    } else if (key == "quad_order") {
      config.q = std::stoi(value);
    } else if (key == "offsets") {
      config.offsets = parse_double_list(value);
    } else if (key == "seed") {
      config.seed = std::stoul(value);
    } else {
      throw CLI::ValidationError(
          "config", path + ":" + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    }
  }
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw CLI::ValidationError("--out", "cannot write '" + out_path + "'");
  }
  out << text;
}

struct CommonFlags {
  std::string config_file;
  std::string kernel, solution, methods, n_list, offsets;
  int r = -1;
  int quad_order = -1;
  long seed = -1;
  std::string out_path;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_file,
                  "key=value config file; flags override its values");
  cmd->add_option("--kernel", flags.kernel, "kernel catalog name");
  cmd->add_option("--solution", flags.solution, "exact-solution catalog name");
  cmd->add_option("--r", flags.r, "half-degree of the polynomial space");
  cmd->add_option("--n-list", flags.n_list,
                  "comma-separated subinterval counts");
  cmd->add_option("--methods", flags.methods, "comma-separated method names");
  cmd->add_option("--quad-order", flags.quad_order,
                  "Gauss points per smooth segment");
  cmd->add_option("--offsets", flags.offsets,
                  "comma-separated node offsets in [0,1]");
  cmd->add_option("--seed", flags.seed, "seed for random probe functions");
  cmd->add_option("--out", flags.out_path, "output path ('-' for stdout)");
  cmd->add_option("--format", flags.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

StudyConfig build_config(const CommonFlags& flags) {
  StudyConfig config;
  if (!flags.config_file.empty()) load_config_file(flags.config_file, config);
  if (!flags.kernel.empty()) config.kernel = flags.kernel;
  if (!flags.solution.empty()) config.solution = flags.solution;
  if (flags.r >= 0) config.r = flags.r;
  if (!flags.n_list.empty()) config.n_list = parse_int_list(flags.n_list);
  if (!flags.methods.empty()) config.methods = parse_methods(flags.methods);
  if (flags.quad_order > 0) config.q = flags.quad_order;
  if (!flags.offsets.empty()) config.offsets = parse_double_list(flags.offsets);
  if (flags.seed >= 0) config.seed = static_cast<unsigned long>(flags.seed);
  return config;
}

int cmd_solve(const CommonFlags& flags) {
  StudyConfig config = build_config(flags);
  if (config.methods.size() != 1) {
    std::cerr << "solve: exactly one method expected via --methods\n";
    return 2;
  }
  validate(config);
  const int n = config.n_list.front();
  const GreensKernel& kernel = kernel_by_name(config.kernel);
  const EvaluableFunction& phi = solution_by_name(config.solution);
  FredholmProblem problem = manufactured_problem(kernel, phi, config.q);
  CollocationGrid grid(make_mesh(n), config.r, config.offsets);
  try {
    SolveResult result;
    switch (config.methods.front()) {
      case Method::Collocation:
        result = solve_collocation(problem, grid, config.q);
        break;
      case Method::Iterated:
        result = iterate(problem, solve_collocation(problem, grid, config.q),
                         config.q);
        break;
      case Method::Modified:
        result = solve_modified(problem, grid, config.q);
        break;
      case Method::IteratedModified:
        result = iterate_modified(problem,
                                  solve_modified(problem, grid, config.q),
                                  config.q);
        break;
    }
    const EvaluableFunction approx = result.solution;
    EvaluableFunction diff(
        [phi, approx](double s) { return phi(s) - approx(s); },
        approx.kinks(), "error");
    std::cout << "method=" << method_name(result.method) << " kernel="
              << config.kernel << " solution=" << config.solution
              << " r=" << config.r << " n=" << n
              << " sup_error=" << sup_norm(diff, grid)
              << " condition=" << result.condition_estimate << "\n";
    return 0;
  } catch (const SolverFailure& e) {
    std::cerr << "solve failed: " << e.what() << "\n";
    return 1;
  }
}

int cmd_study(const CommonFlags& flags) {
  StudyConfig config = build_config(flags);
  ConvergenceReport report = run_study(config);
  write_output(flags.out_path,
               flags.format == "csv" ? report_csv(report)
                                     : report_json(report));
  if (!flags.out_path.empty() && flags.out_path != "-") {
    for (const MethodSeries& s : report.series) {
      std::cout << method_name(s.method) << ": target " << s.target
                << ", tail slope ";
      if (s.tail_slope) {
        std::cout << *s.tail_slope;
      } else {
        std::cout << "n/a";
      }
      std::cout << (s.pass ? " [pass]" : " [fail]") << "\n";
    }
  }
  return report.all_pass ? 0 : 1;
}

int cmd_probes(const CommonFlags& flags) {
  StudyConfig config = build_config(flags);
  ProbeReport report = run_scaling_probes(config);
  write_output(flags.out_path, report_json(report));
  return report.all_pass ? 0 : 1;
}

int cmd_counterexample(const CommonFlags& flags) {
  std::vector<int> ns = {4, 8, 16};
  if (!flags.n_list.empty()) ns = parse_int_list(flags.n_list);
  const int q = flags.quad_order > 0 ? flags.quad_order : 20;
  CounterexampleReport report = run_counterexample(ns, q);
  write_output(flags.out_path, report_json(report));
  return report.all_pass ? 0 : 1;
}

int cmd_report(const std::string& in_path, const CommonFlags& flags) {
  std::ifstream in(in_path);
  if (!in) {
    std::cerr << "report: cannot open '" << in_path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  write_output(flags.out_path, csv_from_json(buf.str()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Convergence laboratory for projection methods on second-kind "
      "Fredholm equations"};
  app.require_subcommand(1);

  CommonFlags solve_flags, study_flags, probe_flags, ce_flags, report_flags;
  std::string report_in;

  CLI::App* solve = app.add_subcommand(
      "solve", "solve one problem with one method and print the sup error");
  add_common(solve, solve_flags);

  CLI::App* study = app.add_subcommand(
      "study", "run a full order-of-convergence study");
  add_common(study, study_flags);

  CLI::App* probes = app.add_subcommand(
      "probes", "run the operator scaling probes");
  add_common(probes, probe_flags);

  CLI::App* counterexample = app.add_subcommand(
      "counterexample",
      "reproduce the non-superconvergent single-node example");
  add_common(counterexample, ce_flags);

  CLI::App* report = app.add_subcommand(
      "report", "re-emit a stored study JSON report as CSV");
  report->add_option("--in", report_in, "stored JSON report")->required();
  add_common(report, report_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(solve_flags);
    if (study->parsed()) return cmd_study(study_flags);
    if (probes->parsed()) return cmd_probes(probe_flags);
    if (counterexample->parsed()) return cmd_counterexample(ce_flags);
    if (report->parsed()) return cmd_report(report_in, report_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
