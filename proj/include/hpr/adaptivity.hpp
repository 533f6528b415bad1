#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hpr/assembly.hpp"
#include "hpr/estimator.hpp"
#include "hpr/mesh.hpp"
#include "hpr/problem.hpp"

namespace hpr {

struct AdaptiveConfig {
  double theta = 0.5;             // Doerfler marking fraction, in (0,1)
  double tau = 0.6;               // smoothness threshold, in (sqrt3/(sqrt6+1), 1)
  int max_iterations = 80;        // refinement steps
  double target_estimate = 1e-10; // stop once the estimate drops below this
  int initial_elements = 10;
  int initial_degree = 1;
  int max_degree = 40;  // guard: a degree raise at the cap bisects instead

  void validate() const;  // throws std::invalid_argument
};

/// Minimal set of element indices whose squared indicators sum to at least
/// theta times the total. Sorted by descending eta^2, ties broken by the
/// smaller element index; returns the marked set in that order. Empty when
/// every indicator is zero (converged).
std::vector<int> dorfler_mark(const std::vector<double>& eta_sq, double theta);

/// Smoothness indicator: ratio of the L-inf norm to the scaled H1 norms of
/// the (p-1)-st derivative of the local solution (a linear polynomial),
/// evaluated in closed form. Always lies in [sqrt3/(sqrt6+1), 1].
double smoothness_indicator(const HpSolution& solution, int j);

/// F >= tau: raise the degree; otherwise bisect.
RefinementKind hp_decide(double F, double tau);

struct TraceEntry {
  int iteration = 0;
  int n_elements = 0;
  int n_dofs = 0;
  int max_degree = 0;
  double eta_total = 0.0;
  std::optional<double> true_error;
  std::optional<double> efficiency;
  HpMesh mesh;
};

struct AdaptiveTrace {
  std::vector<TraceEntry> entries;

  std::vector<double> estimates() const;
  std::vector<double> true_errors() const;  // NaN where unavailable
};

struct AdaptiveResult {
  AdaptiveTrace trace;
  HpSolution final_solution;
  std::vector<ElementIndicator> final_indicators;
};

/// Called after each solve with the iteration number, the solution and its
/// indicators; used for per-iteration artifact emission and diagnostics.
using IterationObserver = std::function<void(
    int, const HpSolution&, const std::vector<ElementIndicator>&)>;

/// The adaptive loop: solve, estimate, record, then mark (Doerfler),
/// decide h-vs-p per marked element via the smoothness indicator, refine;
/// stops at max_iterations or once the estimate reaches the target.
/// Deterministic for a fixed (problem, config).
AdaptiveResult adaptive_solve(const ProblemSpec& problem,
                              const AdaptiveConfig& config,
                              const IterationObserver& observer = {});

}  // namespace hpr
