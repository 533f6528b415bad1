#include "hpr/estimator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "hpr/analysis.hpp"

namespace hpr {

namespace {

// Projection of a reference-coordinate callable onto Legendre degree p:
// c_k = (2k+1)/2 int g(xi) P_k(xi) dxi.
LegendreCoeffs project_reference(const std::function<double(double)>& g, int p,
                                 const QuadratureRule& quad) {
  LegendreCoeffs coeffs(p + 1, 0.0);
  for (int q = 0; q < quad.size(); ++q) {
    const double gv = g(quad.nodes[q]) * quad.weights[q];
    const auto leg = legendre_eval(p, quad.nodes[q]);
    for (int k = 0; k <= p; ++k) coeffs[k] += gv * leg[k];
  }
  for (int k = 0; k <= p; ++k) coeffs[k] *= 0.5 * (2 * k + 1);
  return coeffs;
}

// ||Phi^(beta/2) g||^2_{L2(K)} with Phi(xi) = (1-|xi|)/2. Integrated
// separately on [-1,0] and [0,1] so the kink of Phi at the midpoint does
// not degrade the rule.
double phi_weighted_norm_sq(const std::function<double(double)>& g,
                            double beta_exp, double h,
                            const QuadratureRule& quad) {
  double total = 0.0;
  for (int half = 0; half < 2; ++half) {
    const double lo = half == 0 ? -1.0 : 0.0;
    for (int q = 0; q < quad.size(); ++q) {
      const double xi = lo + 0.5 * (quad.nodes[q] + 1.0);
      const double phi = 0.5 * (1.0 - std::abs(xi));
      const double gv = g(xi);
      total += 0.25 * h * quad.weights[q] * std::pow(phi, beta_exp) * gv * gv;
    }
  }
  return total;
}

void check_remark_windows(const std::vector<double>& alphas,
                          const std::vector<double>& betas,
                          const std::vector<double>& gammas, double epsilon) {
  // Identities of the construction; violations beyond rounding slack are bugs.
  constexpr double slack = 1e-13;
  const int n = static_cast<int>(alphas.size());
  for (int j = 0; j < n; ++j) {
    const double root = std::sqrt(alphas[j] / epsilon);
    if (betas[j] < 2.0 * root * (1.0 - slack) ||
        betas[j] > 3.0 * root * (1.0 + slack))
      throw std::logic_error("estimator: beta outside [2,3]*sqrt(alpha/eps) window");
  }
  for (int node = 1; node < n; ++node) {
    const double m = std::min(betas[node - 1], betas[node]);
    if (gammas[node] < 0.5 * m * (1.0 - slack) ||
        gammas[node] > m * (1.0 + slack))
      throw std::logic_error("estimator: gamma outside [min/2, min] beta window");
  }
}

}  // namespace

double compute_alpha(const HpMesh& mesh, const ProblemSpec& problem, int j) {
  const auto patch_elems = patch(mesh, j);
  const double lo = mesh.x_left(patch_elems.front());
  const double hi = mesh.x_right(patch_elems.back());
  int degree_hint = 1;
  for (int i : patch_elems) degree_hint = std::max(degree_hint, mesh.degrees[i]);

  const double h = mesh.length(j);
  const double p = mesh.degrees[j];
  const double grid_term = h * h / (problem.epsilon * p * p);
  const double d_term = inv_d_sup_on(problem, lo, hi, degree_hint);
  return std::isfinite(d_term) ? std::min(grid_term, d_term) : grid_term;
}

double compute_beta(double alpha, double h, double epsilon) {
  return alpha / h + 2.0 * std::sqrt(alpha / epsilon);
}

std::vector<double> compute_gamma(const std::vector<double>& betas) {
  const int n = static_cast<int>(betas.size());
  if (n < 1) throw std::invalid_argument("compute_gamma: empty beta vector");
  std::vector<double> gammas(n + 1, 0.0);
  for (int node = 1; node < n; ++node) {
    const double sum = betas[node - 1] + betas[node];
    gammas[node] = sum > 0.0 ? betas[node - 1] * betas[node] / sum : 0.0;
  }
  return gammas;
}

LegendreCoeffs l2_project(const ScalarField& f, double x_left, double x_right,
                          int p, int quad_points) {
  const double mid = 0.5 * (x_left + x_right);
  const double h = x_right - x_left;
  const auto quad = gauss_legendre(quad_points);
  return project_reference(
      [&](double xi) { return f(mid + 0.5 * h * xi); }, p, quad);
}

double flux_jump(const HpSolution& solution, int node) {
  const int n = solution.mesh.num_elements();
  if (node < 1 || node > n - 1)
    throw std::out_of_range("flux_jump: interior node index required");
  return solution.deriv_local(node, -1.0) - solution.deriv_local(node - 1, 1.0);
}

ElementIndicator element_indicator(const HpSolution& solution,
                                   const ProblemSpec& problem, int j,
                                   double alpha, double gamma_left,
                                   double gamma_right, double jump_at_left,
                                   double jump_at_right, int quad_points) {
  const HpMesh& mesh = solution.mesh;
  const int p = mesh.degrees[j];
  const double h = mesh.length(j);
  const double mid = 0.5 * (mesh.x_left(j) + mesh.x_right(j));
  const double eps = problem.epsilon;
  const int nq = quad_points > 0 ? quad_points : default_quad_points(p);
  const auto quad = gauss_legendre(nq);

  const auto projected_f =
      l2_project(problem.f, mesh.x_left(j), mesh.x_right(j), p, nq);
  const auto du = legendre_differentiate(solution.element_coeffs[j]);
  const auto d2u = legendre_differentiate(du);
  const double chain_sq = 4.0 / (h * h);

  double residual_sq = 0.0, oscillation_sq = 0.0;
  for (int q = 0; q < quad.size(); ++q) {
    const double xi = quad.nodes[q];
    const double x = mid + 0.5 * h * xi;
    const double w = 0.5 * h * quad.weights[q];
    const double u_val = legendre_sum(solution.element_coeffs[j], xi);
    const double u_dd = chain_sq * legendre_sum(d2u, xi);
    const double pf = legendre_sum(projected_f, xi);
    const double r = pf + eps * u_dd - problem.d(x) * u_val;
    const double osc = problem.f(x) - pf;
    residual_sq += w * r * r;
    oscillation_sq += w * osc * osc;
  }

  ElementIndicator ind;
  ind.alpha = alpha;
  ind.beta = compute_beta(alpha, h, eps);
  ind.gamma_left = gamma_left;
  ind.gamma_right = gamma_right;
  ind.residual_part = alpha * residual_sq;
  ind.oscillation_part = alpha * oscillation_sq;
  ind.jump_left = eps * eps * gamma_left * jump_at_left * jump_at_left;
  ind.jump_right = eps * eps * gamma_right * jump_at_right * jump_at_right;
  ind.eta_sq = ind.residual_part + ind.oscillation_part +
               0.5 * ind.jump_left + 0.5 * ind.jump_right;
  return ind;
}

std::vector<ElementIndicator> compute_indicators(const HpSolution& solution,
                                                 const ProblemSpec& problem,
                                                 int quad_points) {
  const HpMesh& mesh = solution.mesh;
  const int n = mesh.num_elements();

  std::vector<double> alphas(n), betas(n);
  for (int j = 0; j < n; ++j) {
    alphas[j] = compute_alpha(mesh, problem, j);
    betas[j] = compute_beta(alphas[j], mesh.length(j), problem.epsilon);
  }
  const auto gammas = compute_gamma(betas);
  check_remark_windows(alphas, betas, gammas, problem.epsilon);

  std::vector<double> jumps(n + 1, 0.0);  // zero at the domain endpoints
  for (int node = 1; node < n; ++node) jumps[node] = flux_jump(solution, node);

  std::vector<ElementIndicator> indicators;
  indicators.reserve(n);
  for (int j = 0; j < n; ++j)
    indicators.push_back(element_indicator(solution, problem, j, alphas[j],
                                           gammas[j], gammas[j + 1], jumps[j],
                                           jumps[j + 1], quad_points));
  return indicators;
}

double global_estimate(const std::vector<ElementIndicator>& indicators) {
  double total = 0.0;
  for (const auto& ind : indicators) total += ind.eta_sq;
  return std::sqrt(total);
}

double oscillation_R(const HpSolution& solution, const ProblemSpec& problem,
                     int i, double beta_exp, OscillationDegree projection) {
  if (!(beta_exp > 0.5 && beta_exp <= 1.0))
    throw std::invalid_argument("oscillation_R: beta must lie in (1/2, 1]");

  const HpMesh& mesh = solution.mesh;
  const int p = mesh.degrees[i];
  const int proj_degree = projection == OscillationDegree::TwoP ? 2 * p : p;
  const double h = mesh.length(i);
  const double mid = 0.5 * (mesh.x_left(i) + mesh.x_right(i));
  const int nq = default_quad_points(proj_degree);
  const auto quad = gauss_legendre(nq);

  const auto f_ref = [&](double xi) { return problem.f(mid + 0.5 * h * xi); };
  const auto du_ref = [&](double xi) {
    return problem.d(mid + 0.5 * h * xi) * solution.value_local(i, xi);
  };
  const auto proj_f = project_reference(f_ref, proj_degree, quad);
  const auto proj_du = project_reference(du_ref, proj_degree, quad);
  const auto f_wiggle = [&](double xi) {
    return f_ref(xi) - legendre_sum(proj_f, xi);
  };
  const auto du_wiggle = [&](double xi) {
    return du_ref(xi) - legendre_sum(proj_du, xi);
  };

  double plain_f_sq = 0.0, plain_du_sq = 0.0;
  for (int q = 0; q < quad.size(); ++q) {
    const double w = 0.5 * h * quad.weights[q];
    const double fw = f_wiggle(quad.nodes[q]);
    const double dw = du_wiggle(quad.nodes[q]);
    plain_f_sq += w * fw * fw;
    plain_du_sq += w * dw * dw;
  }
  const double phi_f_sq = phi_weighted_norm_sq(f_wiggle, beta_exp, h, quad);
  const double phi_du_sq = phi_weighted_norm_sq(du_wiggle, beta_exp, h, quad);

  return std::pow(p, beta_exp) * (std::sqrt(phi_f_sq) + std::sqrt(phi_du_sq)) +
         std::sqrt(plain_f_sq) + std::sqrt(plain_du_sq);
}

EfficiencyDiagnostics efficiency_diagnostics(const HpSolution& solution,
                                             const ProblemSpec& problem,
                                             double beta_exp,
                                             OscillationDegree projection) {
  if (!problem.has_exact())
    throw std::invalid_argument(
        "efficiency_diagnostics: exact solution required");
  if (!(beta_exp > 0.5 && beta_exp <= 1.0))
    throw std::invalid_argument("efficiency_diagnostics: beta in (1/2, 1]");

  const HpMesh& mesh = solution.mesh;
  const int n = mesh.num_elements();
  const double eps = problem.epsilon;

  const auto error = energy_norm_error(solution, problem);
  const auto& e_sq = error.element_contrib_sq;

  std::vector<double> alphas(n), betas(n);
  for (int j = 0; j < n; ++j) {
    alphas[j] = compute_alpha(mesh, problem, j);
    betas[j] = compute_beta(alphas[j], mesh.length(j), eps);
  }
  const auto gammas = compute_gamma(betas);

  EfficiencyDiagnostics diag;
  diag.beta_exponent = beta_exp;
  diag.oscillation.resize(n);
  diag.rho_volume.resize(n);
  diag.rho_jump.resize(std::max(n - 1, 0));

  // ||f - (-eps u'' + d u)||^2 per element, with the plain right-hand side
  // (the estimator's residual uses Pf instead).
  std::vector<double> strong_residual_sq(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double h = mesh.length(j);
    const double mid = 0.5 * (mesh.x_left(j) + mesh.x_right(j));
    const auto quad = gauss_legendre(default_quad_points(mesh.degrees[j]));
    const auto du = legendre_differentiate(solution.element_coeffs[j]);
    const auto d2u = legendre_differentiate(du);
    const double chain_sq = 4.0 / (h * h);
    for (int q = 0; q < quad.size(); ++q) {
      const double xi = quad.nodes[q];
      const double x = mid + 0.5 * h * xi;
      const double r = problem.f(x) + eps * chain_sq * legendre_sum(d2u, xi) -
                       problem.d(x) * solution.value_local(j, xi);
      strong_residual_sq[j] += 0.5 * h * quad.weights[q] * r * r;
    }
    diag.oscillation[j] = oscillation_R(solution, problem, j, beta_exp, projection);
  }

  for (int j = 0; j < n; ++j) {
    const double p = mesh.degrees[j];
    const double R = diag.oscillation[j];
    const double denom = p * p * e_sq[j] + alphas[j] * R * R;
    if (denom > 0.0)
      diag.rho_volume[j] = alphas[j] * strong_residual_sq[j] / denom;
  }
  for (int node = 1; node < n; ++node) {
    const double jump = flux_jump(solution, node);
    const double num = gammas[node] * eps * eps * jump * jump;
    const double p_left = mesh.degrees[node - 1];
    const double R_l = diag.oscillation[node - 1];
    const double R_r = diag.oscillation[node];
    const double denom = p_left * p_left * (e_sq[node - 1] + e_sq[node]) +
                         alphas[node - 1] * R_l * R_l + alphas[node] * R_r * R_r;
    if (denom > 0.0) diag.rho_jump[node - 1] = num / denom;
  }
  return diag;
}

void write_indicators_csv(const std::vector<ElementIndicator>& indicators,
                          const HpMesh& mesh, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("write_indicators_csv: cannot open " + path);
  file << "j,x_left,x_right,p,eta_sq,alpha,residual_part,oscillation_part,"
          "jump_left,jump_right\n";
  char buf[320];
  for (std::size_t j = 0; j < indicators.size(); ++j) {
    const auto& ind = indicators[j];
    std::snprintf(buf, sizeof(buf),
                  "%zu,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", j,
                  mesh.x_left(static_cast<int>(j)),
                  mesh.x_right(static_cast<int>(j)),
                  mesh.degrees[j], ind.eta_sq, ind.alpha, ind.residual_part,
                  ind.oscillation_part, ind.jump_left, ind.jump_right);
    file << buf;
  }
}

}  // namespace hpr
