#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hpr/assembly.hpp"
#include "hpr/polybasis.hpp"
#include "hpr/problem.hpp"

namespace hpr {

/// True error in the norm (eps ||v'||^2 + |||d|^(1/2) v||^2)^(1/2), split
/// into per-element squared contributions.
struct ErrorReport {
  double energy_error = 0.0;
  std::vector<double> element_contrib_sq;
  bool quadrature_level_cap_hit = false;
};

/// Computes the energy-norm error against the problem's exact solution by
/// adaptive composite Gauss quadrature (p + 20 points per subinterval,
/// bisected until two levels agree to 1e-4 relative, at most 12 levels),
/// so unresolved boundary layers are integrated independently of the mesh.
ErrorReport energy_norm_error(const HpSolution& solution,
                              const ProblemSpec& problem);

/// estimate / true_error; nullopt when the true error is below 1e-14.
std::optional<double> efficiency_index(double estimate, double true_error);

struct ExpFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

/// Least-squares line through (index, ln value) over the last `window`
/// entries of the series; entries with non-positive values are skipped.
/// Throws if fewer than 3 usable points remain.
ExpFit fit_exponential(std::span<const double> values, int window);

/// Multiplicative trace inequality
///   max{|w(0)|, |w(h)|}^2 <= h^-1 ||w||^2 + 2 ||w|| ||w'||
/// for a polynomial given by Legendre coefficients on the reference
/// interval mapped to (0, h). Norms are evaluated in closed form; returns
/// whether the inequality holds up to 1e-12 relative slack.
bool check_trace_inequality(const LegendreCoeffs& w, double h);

}  // namespace hpr
