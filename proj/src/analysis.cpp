#include "hpr/analysis.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace hpr {

namespace {

struct AdaptiveQuad {
  const std::function<double(double)>& integrand;
  const QuadratureRule& rule;
  bool level_cap_hit = false;

  double on(double lo, double hi) const {
    const double mid = 0.5 * (lo + hi);
    const double rad = 0.5 * (hi - lo);
    double sum = 0.0;
    for (int q = 0; q < rule.size(); ++q)
      sum += rule.weights[q] * integrand(mid + rad * rule.nodes[q]);
    return sum * rad;
  }

  double refine(double lo, double hi, double coarse, int level) {
    const double mid = 0.5 * (lo + hi);
    const double left = on(lo, mid);
    const double right = on(mid, hi);
    const double fine = left + right;
    const double diff = std::abs(fine - coarse);
    if (diff <= 1e-4 * std::abs(fine) + 1e-24) return fine;
    if (level >= 12) {
      level_cap_hit = true;
      return fine;
    }
    return refine(lo, mid, left, level + 1) + refine(mid, hi, right, level + 1);
  }

  double integrate(double lo, double hi) { return refine(lo, hi, on(lo, hi), 0); }
};

}  // namespace

ErrorReport energy_norm_error(const HpSolution& solution,
                              const ProblemSpec& problem) {
  if (!problem.has_exact())
    throw std::invalid_argument("energy_norm_error: exact solution required");

  const HpMesh& mesh = solution.mesh;
  ErrorReport report;
  report.element_contrib_sq.resize(mesh.num_elements());

  double total = 0.0;
  for (int j = 0; j < mesh.num_elements(); ++j) {
    const double h = mesh.length(j);
    const double mid = 0.5 * (mesh.x_left(j) + mesh.x_right(j));
    const auto du = legendre_differentiate(solution.element_coeffs[j]);
    const double chain = 2.0 / h;

    const std::function<double(double)> integrand = [&](double x) {
      const double xi = (x - mid) * chain;
      const double ev = problem.exact_u(x) -
                        legendre_sum(solution.element_coeffs[j], xi);
      const double ed = problem.exact_du(x) - chain * legendre_sum(du, xi);
      return problem.epsilon * ed * ed + std::abs(problem.d(x)) * ev * ev;
    };

    const auto rule = gauss_legendre(mesh.degrees[j] + 20);
    AdaptiveQuad quad{integrand, rule};
    const double contrib = quad.integrate(mesh.x_left(j), mesh.x_right(j));
    report.element_contrib_sq[j] = std::max(contrib, 0.0);
    report.quadrature_level_cap_hit |= quad.level_cap_hit;
    total += report.element_contrib_sq[j];
  }
  report.energy_error = std::sqrt(total);
  return report;
}

std::optional<double> efficiency_index(double estimate, double true_error) {
  if (true_error <= 1e-14) return std::nullopt;
  return estimate / true_error;
}

ExpFit fit_exponential(std::span<const double> values, int window) {
  if (window < 3)
    throw std::invalid_argument("fit_exponential: window must be >= 3");
  const std::size_t begin =
      values.size() > static_cast<std::size_t>(window)
          ? values.size() - static_cast<std::size_t>(window)
          : 0;

  std::vector<double> xs, ys;
  for (std::size_t i = begin; i < values.size(); ++i) {
    if (values[i] > 0.0) {
      xs.push_back(static_cast<double>(i));
      ys.push_back(std::log(values[i]));
    }
  }
  if (xs.size() < 3)
    throw std::invalid_argument("fit_exponential: fewer than 3 usable points");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }

  ExpFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

bool check_trace_inequality(const LegendreCoeffs& w, double h) {
  if (!(h > 0.0)) throw std::domain_error("check_trace_inequality: h > 0");

  // Exact norms from Legendre orthogonality: ||P_k||^2 = 2/(2k+1) on the
  // reference interval, scaled by the h/2 Jacobian.
  const auto norm_sq = [h](const LegendreCoeffs& c) {
    double sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k)
      sum += c[k] * c[k] * 2.0 / (2.0 * static_cast<double>(k) + 1.0);
    return 0.5 * h * sum;
  };

  auto dw = legendre_differentiate(w);
  for (double& c : dw) c *= 2.0 / h;

  const double w0 = legendre_sum(w, -1.0);
  const double wh = legendre_sum(w, 1.0);
  const double lhs = std::max(w0 * w0, wh * wh);
  const double w_norm = std::sqrt(norm_sq(w));
  const double dw_norm = std::sqrt(norm_sq(dw));
  const double rhs = w_norm * w_norm / h + 2.0 * w_norm * dw_norm;
  return lhs <= rhs * (1.0 + 1e-12);
}

}  // namespace hpr
