#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hpr/adaptivity.hpp"
#include "hpr/assembly.hpp"
#include "hpr/estimator.hpp"

namespace hpr {

/// One row of the trace CSV schema
/// (iter, n_elem, n_dof, max_p, eta_total, true_error, efficiency);
/// optional fields are empty in the file.
struct TraceRow {
  int iteration = 0;
  int n_elements = 0;
  int n_dofs = 0;
  int max_degree = 0;
  double eta_total = 0.0;
  std::optional<double> true_error;
  std::optional<double> efficiency;

  bool operator==(const TraceRow&) const = default;
};

std::vector<TraceRow> trace_rows(const AdaptiveTrace& trace);

/// Numbers are written with 17 significant digits so a re-parse
/// reproduces the in-memory values exactly.
void write_trace_csv(const AdaptiveTrace& trace, const std::string& path);
std::vector<TraceRow> read_trace_csv(const std::string& path);

/// u_hp sampled at `per_element` equispaced reference points per element
/// (endpoints included, so shared breakpoints appear once per side).
std::vector<std::pair<double, double>> solution_samples(
    const HpSolution& solution, int per_element = 20);

void write_solution_csv(const HpSolution& solution, const std::string& path,
                        int per_element = 20);

/// Long-form dump: rows (kind, index, value) with kind in
/// {osc_R, rho_vol, rho_jump}; flagged ratios have an empty value field.
void write_diagnostics_csv(const EfficiencyDiagnostics& diagnostics,
                           const std::string& path);

std::string format_double(double value);  // %.17g

}  // namespace hpr
