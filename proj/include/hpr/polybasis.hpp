#pragma once

#include <vector>

namespace hpr {

/// Gauss-Legendre quadrature rule on the reference interval [-1,1].
/// Nodes are strictly increasing, weights positive and summing to 2.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Coefficients w.r.t. Legendre polynomials P_0..P_p on [-1,1];
/// index k holds the coefficient of P_k.
using LegendreCoeffs = std::vector<double>;

/// Values of P_0(x)..P_p(x) by the three-term recurrence.
/// Throws std::domain_error if |x| > 1 + 1e-12.
std::vector<double> legendre_eval(int p, double x);

/// Evaluate a Legendre series at x in [-1,1].
double legendre_sum(const LegendreCoeffs& coeffs, double x);

/// Legendre coefficients of the derivative (w.r.t. the reference
/// coordinate). Output length max(len-1, 1).
LegendreCoeffs legendre_differentiate(const LegendreCoeffs& coeffs);

/// n-point Gauss-Legendre rule; nodes from Newton iteration on P_n
/// seeded with Chebyshev guesses.
QuadratureRule gauss_legendre(int n);

/// Hierarchical shape functions on [-1,1]: two linear hats
/// N_0 = (1-x)/2, N_1 = (1+x)/2, then p-1 integrated-Legendre bubbles
/// N_k(x) = int_{-1}^{x} P_{k-1}, k = 2..p. Bubbles vanish at x = +-1.
struct ShapeValues {
  std::vector<double> value;  // size p+1
  std::vector<double> deriv;  // size p+1, derivative w.r.t. x
};

ShapeValues shape_functions(int p, double x);

/// Legendre coefficients of v_left*N_0 + v_right*N_1 + sum_k bubble_k*N_k.
LegendreCoeffs shape_to_legendre(double v_left, double v_right,
                                 const std::vector<double>& bubbles);

/// Default quadrature point count for assembly and estimator integrals
/// on an element of degree p.
inline int default_quad_points(int p) { return p + 10; }

}  // namespace hpr
