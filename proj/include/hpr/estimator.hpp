#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hpr/assembly.hpp"
#include "hpr/mesh.hpp"
#include "hpr/problem.hpp"

namespace hpr {

/// Elementwise error indicator
///   eta_j^2 = alpha_j (||Pf + eps u'' - d u||^2 + ||f - Pf||^2)
///             + 1/2 eps^2 gamma_{j-1} |[u'](x_{j-1})|^2
///             + 1/2 eps^2 gamma_j |[u'](x_j)|^2
/// with P the elementwise L2 projection onto the local degree.
struct ElementIndicator {
  double eta_sq = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_left = 0.0;   // gamma at the element's left node
  double gamma_right = 0.0;  // gamma at the element's right node
  double residual_part = 0.0;
  double oscillation_part = 0.0;
  double jump_left = 0.0;   // eps^2 gamma |[u']|^2, full (halved in eta_sq)
  double jump_right = 0.0;
};

/// alpha_j = min{ eps^-1 h_j^2 p_j^-2 , ||1/d||_{L^inf(patch)} } with the
/// second argument dropped when the bound is infinite.
double compute_alpha(const HpMesh& mesh, const ProblemSpec& problem, int j);

/// beta_j = alpha_j / h_j + 2 sqrt(alpha_j / eps).
double compute_beta(double alpha, double h, double epsilon);

/// Node weights gamma_0..gamma_N: harmonic-mean-type combination
/// beta_j beta_{j+1} / (beta_j + beta_{j+1}) at interior nodes, 0 at the
/// boundary (and when both betas vanish).
std::vector<double> compute_gamma(const std::vector<double>& betas);

/// Legendre coefficients of the L2(K) projection of f onto degree p, for
/// the element (x_left, x_right).
LegendreCoeffs l2_project(const ScalarField& f, double x_left, double x_right,
                          int p, int quad_points);

/// [u'](x_node) = u'(x+) - u'(x-) at an interior node (1..N-1).
double flux_jump(const HpSolution& solution, int node);

/// quad_points <= 0 means the default p + 10 rule.
ElementIndicator element_indicator(const HpSolution& solution,
                                   const ProblemSpec& problem, int j,
                                   double alpha, double gamma_left,
                                   double gamma_right, double jump_at_left,
                                   double jump_at_right, int quad_points = 0);

/// Full pipeline: alphas, betas, gammas (with the Remark window checks),
/// jumps, and per-element indicators.
std::vector<ElementIndicator> compute_indicators(const HpSolution& solution,
                                                 const ProblemSpec& problem,
                                                 int quad_points = 0);

/// sqrt(sum eta_j^2); reported without the unknown reliability constant.
double global_estimate(const std::vector<ElementIndicator>& indicators);

enum class OscillationDegree { P, TwoP };

/// Data oscillation term of the efficiency bound:
///   R_K = p^beta [ ||Phi^(beta/2)(f - Pf)|| + ||Phi^(beta/2)(du - P(du))|| ]
///         + ||f - Pf|| + ||du - P(du)||
/// with Phi the scaled distance from the element boundary and beta in
/// (1/2, 1]. The projection degree is p or 2p.
double oscillation_R(const HpSolution& solution, const ProblemSpec& problem,
                     int i, double beta_exp,
                     OscillationDegree projection = OscillationDegree::P);

/// Lower-bound diagnostics (exact solution required): ratios of estimator
/// constituents to the efficiency-bound right-hand sides. Entries with a
/// vanishing denominator are flagged (nullopt), never divided.
///
/// rho_jump weighs the jump of the derivative u_hp' at the node: the
/// lower-bound statement is occasionally written with the jump of u_hp
/// itself, but u_hp is continuous, so only the flux jump is meaningful.
struct EfficiencyDiagnostics {
  double beta_exponent = 1.0;
  std::vector<double> oscillation;                 // R_K per element
  std::vector<std::optional<double>> rho_volume;   // per element
  std::vector<std::optional<double>> rho_jump;     // per interior node
};

EfficiencyDiagnostics efficiency_diagnostics(
    const HpSolution& solution, const ProblemSpec& problem, double beta_exp,
    OscillationDegree projection = OscillationDegree::P);

void write_indicators_csv(const std::vector<ElementIndicator>& indicators,
                          const HpMesh& mesh, const std::string& path);

}  // namespace hpr
