#pragma once

#include <iostream>
#include <string>
#include <vector>

#include "hpr/adaptivity.hpp"
#include "hpr/estimator.hpp"

namespace hpr {

struct EmitFlags {
  bool trace = true;
  bool mesh = false;
  bool indicators = false;
  bool diagnostics = false;
  bool solution = false;
};

/// Full experiment configuration: one adaptive campaign per epsilon.
struct RunConfig {
  std::string problem = "example1";
  std::vector<double> epsilons = {1e-4};
  AdaptiveConfig adaptive;
  std::string out_dir = "out";
  EmitFlags emit;
  double diag_beta = 1.0;  // Appendix-style oscillation exponent
  OscillationDegree osc_degree = OscillationDegree::P;
  int jobs = 1;

  void validate() const;  // throws std::invalid_argument
};

/// Executes the campaign and writes trace_<problem>_<eps>.csv,
/// summary.json and the requested optional artifacts under out_dir
/// (per-iteration snapshots under runs/<problem>_<eps>/).
/// Returns 0 on success, 1 on solver failure (iteration context on
/// err_stream), 2 on invalid configuration.
int run(const RunConfig& config, std::ostream& err_stream = std::cerr);

/// Plot-ready files for one finished run: series_<tag>.csv
/// (iter, n_dof, eta_total, true_error), meshbars_<tag>.csv and
/// solution_<tag>.csv with 20 samples per element.
void emit_plot_data(const AdaptiveTrace& trace, const HpSolution& final_solution,
                    const std::string& out_dir, const std::string& tag);

std::string epsilon_tag(double epsilon);

}  // namespace hpr
