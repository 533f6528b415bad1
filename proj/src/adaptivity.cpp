#include "hpr/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "hpr/analysis.hpp"

namespace hpr {

namespace {

const double kTauLower = std::sqrt(3.0) / (std::sqrt(6.0) + 1.0);

}  // namespace

void AdaptiveConfig::validate() const {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("config: theta must lie in (0,1)");
  if (!(tau > kTauLower && tau < 1.0))
    throw std::invalid_argument("config: tau must lie in (sqrt3/(sqrt6+1), 1)");
  if (max_iterations < 0)
    throw std::invalid_argument("config: max_iterations must be >= 0");
  if (!(target_estimate >= 0.0))
    throw std::invalid_argument("config: target_estimate must be >= 0");
  if (initial_elements < 1 || initial_degree < 1)
    throw std::invalid_argument("config: initial mesh needs N >= 1, p >= 1");
  if (max_degree < initial_degree)
    throw std::invalid_argument("config: max_degree below initial degree");
}

std::vector<int> dorfler_mark(const std::vector<double>& eta_sq, double theta) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("dorfler_mark: theta must lie in (0,1)");

  const double total = std::accumulate(eta_sq.begin(), eta_sq.end(), 0.0);
  if (total <= 0.0) return {};

  std::vector<int> order(eta_sq.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (eta_sq[a] != eta_sq[b]) return eta_sq[a] > eta_sq[b];
    return a < b;
  });

  const double threshold = theta * total;
  std::vector<int> marked;
  double sum = 0.0, sum_before_last = 0.0;
  for (int j : order) {
    sum_before_last = sum;
    sum += eta_sq[j];
    marked.push_back(j);
    if (sum >= threshold) break;
  }

  // Doerfler minimality: dropping the last marked element must fall short.
  if (sum < threshold || (marked.size() > 1 && sum_before_last >= threshold))
    throw std::logic_error("dorfler_mark: minimality violated");
  return marked;
}

double smoothness_indicator(const HpSolution& solution, int j) {
  const int p = solution.mesh.degrees[j];
  const double h = solution.mesh.length(j);

  // (p-1)-st derivative of the local solution: a linear polynomial
  // a + b xi in the reference coordinate, in physical derivative units.
  LegendreCoeffs g = solution.element_coeffs[j];
  for (int k = 1; k < p; ++k) {
    g = legendre_differentiate(g);
    for (double& c : g) c *= 2.0 / h;
  }
  const double a = g.empty() ? 0.0 : g[0];
  const double b = g.size() > 1 ? g[1] : 0.0;
  if (a == 0.0 && b == 0.0) return 1.0;

  // For linear g: ||g||_inf = max endpoint value; the L2 norms of g and of
  // g' = (2/h) b have closed forms whose h factors cancel against the
  // h^(-1/2), h^(1/2) scalings.
  const double sup = std::max(std::abs(a - b), std::abs(a + b));
  const double denom =
      std::sqrt(a * a + b * b / 3.0) + std::sqrt(2.0) * std::abs(b);
  const double F = sup / denom;

  if (F < kTauLower - 1e-12 || F > 1.0 + 1e-12)
    throw std::logic_error("smoothness_indicator: value outside its range");
  return F;
}

RefinementKind hp_decide(double F, double tau) {
  if (!(tau > kTauLower && tau < 1.0))
    throw std::invalid_argument("hp_decide: tau outside its valid range");
  return F >= tau ? RefinementKind::RaiseDegree : RefinementKind::Bisect;
}

std::vector<double> AdaptiveTrace::estimates() const {
  std::vector<double> values;
  values.reserve(entries.size());
  for (const auto& e : entries) values.push_back(e.eta_total);
  return values;
}

std::vector<double> AdaptiveTrace::true_errors() const {
  std::vector<double> values;
  values.reserve(entries.size());
  for (const auto& e : entries)
    values.push_back(e.true_error.value_or(std::numeric_limits<double>::quiet_NaN()));
  return values;
}

AdaptiveResult adaptive_solve(const ProblemSpec& problem,
                              const AdaptiveConfig& config,
                              const IterationObserver& observer) {
  config.validate();

  AdaptiveResult result;
  HpMesh mesh = uniform_mesh(problem.a, problem.b, config.initial_elements,
                             config.initial_degree);

  for (int iter = 0;; ++iter) {
    HpSolution solution;
    std::vector<ElementIndicator> indicators;
    try {
      solution = solve(mesh, problem);
      indicators = compute_indicators(solution, problem);
    } catch (SolverError& err) {
      err.iteration = iter;
      throw;
    }
    const double estimate = global_estimate(indicators);

    TraceEntry entry;
    entry.iteration = iter;
    entry.n_elements = mesh.num_elements();
    entry.n_dofs = build_dof_map(mesh).total;
    entry.max_degree = mesh.max_degree();
    entry.eta_total = estimate;
    entry.mesh = mesh;
    if (problem.has_exact()) {
      const auto report = energy_norm_error(solution, problem);
      entry.true_error = report.energy_error;
      entry.efficiency = efficiency_index(estimate, report.energy_error);
    }
    if (!result.trace.entries.empty() &&
        entry.n_dofs <= result.trace.entries.back().n_dofs)
      throw std::logic_error("adaptive_solve: DOF count failed to increase");
    result.trace.entries.push_back(std::move(entry));

    if (observer) observer(iter, solution, indicators);

    if (iter >= config.max_iterations || estimate <= config.target_estimate) {
      result.final_solution = std::move(solution);
      result.final_indicators = std::move(indicators);
      break;
    }

    std::vector<double> eta_sq(indicators.size());
    for (std::size_t j = 0; j < indicators.size(); ++j)
      eta_sq[j] = indicators[j].eta_sq;
    const auto marked = dorfler_mark(eta_sq, config.theta);
    if (marked.empty()) {
      result.final_solution = std::move(solution);
      result.final_indicators = std::move(indicators);
      break;
    }

    std::vector<RefinementDecision> decisions;
    decisions.reserve(marked.size());
    for (int j : marked) {
      const double F = smoothness_indicator(solution, j);
      RefinementKind kind = hp_decide(F, config.tau);
      if (kind == RefinementKind::RaiseDegree && mesh.degrees[j] >= config.max_degree)
        kind = RefinementKind::Bisect;
      decisions.push_back({j, kind});
    }
    mesh = apply_refinements(mesh, decisions);
  }
  return result;
}

}  // namespace hpr
