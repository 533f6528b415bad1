#pragma once

#include <functional>
#include <string>

namespace hpr {

using ScalarField = std::function<double(double)>;

/// Two-point boundary value problem -eps u'' + d(x) u = f(x) on (a,b) with
/// homogeneous Dirichlet conditions. Field callables must be reentrant.
struct ProblemSpec {
  double epsilon = 1.0;
  ScalarField d;
  ScalarField f;
  double a = -1.0;
  double b = 1.0;

  // Optional closed-form solution (empty when unavailable).
  ScalarField exact_u;
  ScalarField exact_du;

  // Optional analytic sup of |1/d| over a subinterval [l,r]; returns
  // +infinity when 1/d is unbounded there. When absent, callers fall back
  // to Chebyshev sampling of |d| (see inv_d_sup_on).
  std::function<double(double, double)> inv_d_bound;

  std::string name = "custom";

  bool has_exact() const { return static_cast<bool>(exact_u); }
};

/// -eps u'' + u = 1 on (-1,1). Exact solution
/// u = 1 - cosh(x/sqrt(eps))/cosh(1/sqrt(eps)), evaluated in an
/// overflow-safe exponential form.
ProblemSpec example1(double epsilon);

/// Airy-type problem -eps u'' + x u = 1 on (-1,1); no closed-form solution.
ProblemSpec example2(double epsilon);

/// Manufactured problem: given u (with u(a)=u(b)=0 to 1e-10), its first two
/// derivatives and a reaction coefficient d, sets f := -eps u'' + d u and
/// keeps u as the exact solution.
ProblemSpec manufactured(double epsilon, double a, double b, ScalarField u,
                         ScalarField du, ScalarField d2u, ScalarField d);

/// u = sin(pi x) on (0,1) with d == 1 (the "manufactured-sin" CLI problem).
ProblemSpec manufactured_sin(double epsilon);

/// Problem lookup by CLI name: "example1" | "example2" | "manufactured-sin".
ProblemSpec problem_by_name(const std::string& name, double epsilon);

/// ||1/d||_{L^inf([l,r])}: the analytic bound when the problem carries one,
/// otherwise 1/min over a Chebyshev grid of max(2*degree_hint+1, 33) samples
/// of |d|, declared +infinity if any sample is below 1e-12.
double inv_d_sup_on(const ProblemSpec& problem, double l, double r,
                    int degree_hint);

}  // namespace hpr
