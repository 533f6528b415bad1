#include "hpr/runner.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "hpr/analysis.hpp"
#include "hpr/io.hpp"
#include "hpr/problem.hpp"

namespace hpr {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  adaptive.validate();
  if (epsilons.empty())
    throw std::invalid_argument("config: at least one epsilon required");
  for (double eps : epsilons)
    if (!(eps > 0.0))
      throw std::invalid_argument("config: epsilon values must be positive");
  problem_by_name(problem, epsilons.front());  // throws on unknown name
  if (!(diag_beta > 0.5 && diag_beta <= 1.0))
    throw std::invalid_argument("config: diagnostics beta must lie in (1/2, 1]");
  if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  if (out_dir.empty()) throw std::invalid_argument("config: empty output directory");
}

std::string epsilon_tag(double epsilon) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", epsilon);
  return buf;
}

void emit_plot_data(const AdaptiveTrace& trace, const HpSolution& final_solution,
                    const std::string& out_dir, const std::string& tag) {
  {
    std::ofstream file(out_dir + "/series_" + tag + ".csv");
    if (!file) throw std::runtime_error("emit_plot_data: cannot write series");
    file << "iter,n_dof,eta_total,true_error\n";
    for (const auto& e : trace.entries) {
      file << e.iteration << ',' << e.n_dofs << ',' << format_double(e.eta_total)
           << ',';
      if (e.true_error) file << format_double(*e.true_error);
      file << '\n';
    }
  }
  write_mesh_csv(final_solution.mesh, out_dir + "/meshbars_" + tag + ".csv");
  write_solution_csv(final_solution, out_dir + "/solution_" + tag + ".csv");
}

namespace {

struct RunOutcome {
  double epsilon = 0.0;
  bool ok = false;
  std::string error_message;

  int iterations = 0;
  int n_elements = 0;
  int n_dofs = 0;
  int max_degree = 0;
  double final_estimate = 0.0;
  std::optional<double> final_true_error;
  std::optional<double> efficiency_min_last10;
  std::optional<double> efficiency_max_last10;
  std::optional<double> fit_slope, fit_r2;
  std::optional<double> fit_slope_true, fit_r2_true;
};

RunOutcome execute_single(const RunConfig& config, double epsilon) {
  RunOutcome outcome;
  outcome.epsilon = epsilon;

  const auto problem = problem_by_name(config.problem, epsilon);
  const std::string tag = config.problem + "_" + epsilon_tag(epsilon);
  const fs::path out(config.out_dir);
  const fs::path snapshots = out / "runs" / tag;
  if (config.emit.mesh || config.emit.indicators)
    fs::create_directories(snapshots);

  IterationObserver observer;
  if (config.emit.mesh || config.emit.indicators) {
    observer = [&](int iter, const HpSolution& solution,
                   const std::vector<ElementIndicator>& indicators) {
      if (config.emit.mesh)
        write_mesh_csv(solution.mesh,
                       (snapshots / ("mesh_" + std::to_string(iter) + ".csv")).string());
      if (config.emit.indicators)
        write_indicators_csv(indicators, solution.mesh,
                             (snapshots / ("indicators_" + std::to_string(iter) + ".csv")).string());
    };
  }

  const auto result = adaptive_solve(problem, config.adaptive, observer);
  const auto& entries = result.trace.entries;

  if (config.emit.trace)
    write_trace_csv(result.trace, (out / ("trace_" + tag + ".csv")).string());
  if (config.emit.solution || config.emit.mesh)
    emit_plot_data(result.trace, result.final_solution, out.string(), tag);
  if (config.emit.diagnostics && problem.has_exact()) {
    const auto diag = efficiency_diagnostics(result.final_solution, problem,
                                             config.diag_beta, config.osc_degree);
    write_diagnostics_csv(
        diag, (out / ("diagnostics_" + epsilon_tag(epsilon) + ".csv")).string());
  }

  const auto& last = entries.back();
  outcome.iterations = last.iteration;
  outcome.n_elements = last.n_elements;
  outcome.n_dofs = last.n_dofs;
  outcome.max_degree = last.max_degree;
  outcome.final_estimate = last.eta_total;
  outcome.final_true_error = last.true_error;

  const std::size_t eff_window = 10;
  const std::size_t eff_begin =
      entries.size() > eff_window ? entries.size() - eff_window : 0;
  for (std::size_t i = eff_begin; i < entries.size(); ++i) {
    if (!entries[i].efficiency) continue;
    const double eff = *entries[i].efficiency;
    if (!outcome.efficiency_min_last10 || eff < *outcome.efficiency_min_last10)
      outcome.efficiency_min_last10 = eff;
    if (!outcome.efficiency_max_last10 || eff > *outcome.efficiency_max_last10)
      outcome.efficiency_max_last10 = eff;
  }

  const auto estimates = result.trace.estimates();
  const int window = std::min<int>(15, static_cast<int>(estimates.size()));
  try {
    const auto fit = fit_exponential(estimates, window);
    outcome.fit_slope = fit.slope;
    outcome.fit_r2 = fit.r_squared;
  } catch (const std::invalid_argument&) {
  }
  if (problem.has_exact()) {
    std::vector<double> errors;
    for (const auto& e : entries) errors.push_back(e.true_error.value_or(-1.0));
    try {
      const auto fit = fit_exponential(errors, window);
      outcome.fit_slope_true = fit.slope;
      outcome.fit_r2_true = fit.r_squared;
    } catch (const std::invalid_argument&) {
    }
  }

  outcome.ok = true;
  return outcome;
}

json optional_to_json(const std::optional<double>& value) {
  if (value) return *value;
  return nullptr;
}

}  // namespace

int run(const RunConfig& config, std::ostream& err_stream) {
  try {
    config.validate();
  } catch (const std::exception& err) {
    err_stream << "hp-robust: invalid configuration: " << err.what() << "\n";
    return 2;
  }

  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec || !fs::is_directory(config.out_dir)) {
    err_stream << "hp-robust: cannot create output directory '" << config.out_dir
               << "'\n";
    return 2;
  }

  std::vector<RunOutcome> outcomes(config.epsilons.size());
  std::atomic<std::size_t> next{0};
  const int n_workers =
      std::min<int>(config.jobs, static_cast<int>(config.epsilons.size()));

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.epsilons.size()) return;
      try {
        outcomes[i] = execute_single(config, config.epsilons[i]);
      } catch (const SolverError& err) {
        outcomes[i].epsilon = config.epsilons[i];
        outcomes[i].error_message = std::string(err.what()) + " (iteration " +
                                    std::to_string(err.iteration) + ")";
      } catch (const std::exception& err) {
        outcomes[i].epsilon = config.epsilons[i];
        outcomes[i].error_message = err.what();
      }
    }
  };

  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }

  bool failed = false;
  for (const auto& outcome : outcomes) {
    if (!outcome.ok) {
      failed = true;
      err_stream << "hp-robust: run with epsilon=" << epsilon_tag(outcome.epsilon)
                 << " failed: " << outcome.error_message << "\n";
    }
  }
  if (failed) return 1;

  json summary;
  summary["problem"] = config.problem;
  summary["theta"] = config.adaptive.theta;
  summary["tau"] = config.adaptive.tau;
  summary["max_iterations"] = config.adaptive.max_iterations;
  summary["runs"] = json::array();
  for (const auto& o : outcomes) {
    json entry;
    entry["epsilon"] = o.epsilon;
    entry["iterations"] = o.iterations;
    entry["n_elements"] = o.n_elements;
    entry["n_dofs"] = o.n_dofs;
    entry["max_degree"] = o.max_degree;
    entry["final_estimate"] = o.final_estimate;
    entry["final_true_error"] = optional_to_json(o.final_true_error);
    entry["efficiency_min_last10"] = optional_to_json(o.efficiency_min_last10);
    entry["efficiency_max_last10"] = optional_to_json(o.efficiency_max_last10);
    entry["fit_slope_estimate"] = optional_to_json(o.fit_slope);
    entry["fit_r2_estimate"] = optional_to_json(o.fit_r2);
    entry["fit_slope_true_error"] = optional_to_json(o.fit_slope_true);
    entry["fit_r2_true_error"] = optional_to_json(o.fit_r2_true);
    summary["runs"].push_back(entry);
  }

  std::ofstream file(fs::path(config.out_dir) / "summary.json");
  if (!file) {
    err_stream << "hp-robust: cannot write summary.json\n";
    return 2;
  }
  file << summary.dump(2) << "\n";
  return 0;
}

}  // namespace hpr
