#include "hpr/polybasis.hpp"

#include <cmath>
#include <stdexcept>

namespace hpr {

std::vector<double> legendre_eval(int p, double x) {
  if (p < 0) throw std::invalid_argument("legendre_eval: degree must be >= 0");
  if (std::abs(x) > 1.0 + 1e-12)
    throw std::domain_error("legendre_eval: point outside [-1,1]");

  std::vector<double> values(p + 1);
  values[0] = 1.0;
  if (p >= 1) values[1] = x;
  for (int k = 1; k < p; ++k)
    values[k + 1] = ((2 * k + 1) * x * values[k] - k * values[k - 1]) / (k + 1);
  return values;
}

double legendre_sum(const LegendreCoeffs& coeffs, double x) {
  if (coeffs.empty()) return 0.0;
  const auto values = legendre_eval(static_cast<int>(coeffs.size()) - 1, x);
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) sum += coeffs[k] * values[k];
  return sum;
}

LegendreCoeffs legendre_differentiate(const LegendreCoeffs& coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;  // input degree
  if (n <= 0) return LegendreCoeffs{0.0};

  // d/dx sum a_k P_k = sum_j (2j+1) s_j P_j with s_j = a_{j+1} + s_{j+2}.
  LegendreCoeffs out(n);
  double s_plus_1 = 0.0;  // s_{j+1}
  double s_plus_2 = 0.0;  // s_{j+2}
  for (int j = n - 1; j >= 0; --j) {
    const double s = coeffs[j + 1] + s_plus_2;
    out[j] = (2 * j + 1) * s;
    s_plus_2 = s_plus_1;
    s_plus_1 = s;
  }
  return out;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");

  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev initial guess for the i-th root (descending order).
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // P_n(x) and P_{n-1}(x) by recurrence.
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (p0 - x * p1) / (1.0 - x * x);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Mirror onto the increasing-node layout.
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

ShapeValues shape_functions(int p, double x) {
  if (p < 1) throw std::invalid_argument("shape_functions: degree must be >= 1");

  ShapeValues shapes;
  shapes.value.assign(p + 1, 0.0);
  shapes.deriv.assign(p + 1, 0.0);

  shapes.value[0] = 0.5 * (1.0 - x);
  shapes.value[1] = 0.5 * (1.0 + x);
  shapes.deriv[0] = -0.5;
  shapes.deriv[1] = 0.5;

  if (p >= 2) {
    const auto leg = legendre_eval(p, x);
    // N_k = (P_k - P_{k-2}) / (2k-1), N_k' = P_{k-1}.
    for (int k = 2; k <= p; ++k) {
      shapes.value[k] = (leg[k] - leg[k - 2]) / (2 * k - 1);
      shapes.deriv[k] = leg[k - 1];
    }
  }
  return shapes;
}

LegendreCoeffs shape_to_legendre(double v_left, double v_right,
                                 const std::vector<double>& bubbles) {
  const int p = static_cast<int>(bubbles.size()) + 1;
  LegendreCoeffs coeffs(p + 1, 0.0);
  coeffs[0] = 0.5 * (v_left + v_right);
  coeffs[1] = 0.5 * (v_right - v_left);
  for (int k = 2; k <= p; ++k) {
    const double c = bubbles[k - 2] / (2 * k - 1);
    coeffs[k] += c;
    coeffs[k - 2] -= c;
  }
  return coeffs;
}

}  // namespace hpr
