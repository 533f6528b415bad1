#include "hpr/problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hpr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_epsilon(double epsilon) {
  if (!(epsilon > 0.0))
    throw std::domain_error("problem: epsilon must be positive");
}

}  // namespace

ProblemSpec example1(double epsilon) {
  require_positive_epsilon(epsilon);
  const double s = std::sqrt(epsilon);

  ProblemSpec problem;
  problem.name = "example1";
  problem.epsilon = epsilon;
  problem.a = -1.0;
  problem.b = 1.0;
  problem.d = [](double) { return 1.0; };
  problem.f = [](double) { return 1.0; };
  // cosh(x/s)/cosh(1/s) rewritten with non-positive exponents only, so the
  // layer evaluation never overflows for tiny eps.
  problem.exact_u = [s](double x) {
    const double denom = 1.0 + std::exp(-2.0 / s);
    return 1.0 - (std::exp((x - 1.0) / s) + std::exp(-(x + 1.0) / s)) / denom;
  };
  problem.exact_du = [s](double x) {
    const double denom = 1.0 + std::exp(-2.0 / s);
    return -(std::exp((x - 1.0) / s) - std::exp(-(x + 1.0) / s)) / (s * denom);
  };
  problem.inv_d_bound = [](double, double) { return 1.0; };
  return problem;
}

ProblemSpec example2(double epsilon) {
  require_positive_epsilon(epsilon);

  ProblemSpec problem;
  problem.name = "example2";
  problem.epsilon = epsilon;
  problem.a = -1.0;
  problem.b = 1.0;
  problem.d = [](double x) { return x; };
  problem.f = [](double) { return 1.0; };
  // sup of 1/|x| over [l,r]; unbounded on any interval touching 0.
  problem.inv_d_bound = [](double l, double r) {
    if (l <= 0.0 && r >= 0.0) return kInf;
    return l > 0.0 ? 1.0 / l : 1.0 / std::abs(r);
  };
  return problem;
}

ProblemSpec manufactured(double epsilon, double a, double b, ScalarField u,
                         ScalarField du, ScalarField d2u, ScalarField d) {
  require_positive_epsilon(epsilon);
  if (!(a < b)) throw std::domain_error("manufactured: need a < b");
  if (std::abs(u(a)) > 1e-10 || std::abs(u(b)) > 1e-10)
    throw std::domain_error("manufactured: u must vanish at both endpoints");

  ProblemSpec problem;
  problem.name = "manufactured";
  problem.epsilon = epsilon;
  problem.a = a;
  problem.b = b;
  problem.d = d;
  problem.f = [epsilon, d2u, d, u](double x) {
    return -epsilon * d2u(x) + d(x) * u(x);
  };
  problem.exact_u = std::move(u);
  problem.exact_du = std::move(du);
  return problem;
}

ProblemSpec manufactured_sin(double epsilon) {
  const double pi = M_PI;
  auto problem = manufactured(
      epsilon, 0.0, 1.0, [pi](double x) { return std::sin(pi * x); },
      [pi](double x) { return pi * std::cos(pi * x); },
      [pi](double x) { return -pi * pi * std::sin(pi * x); },
      [](double) { return 1.0; });
  problem.name = "manufactured-sin";
  problem.inv_d_bound = [](double, double) { return 1.0; };
  return problem;
}

ProblemSpec problem_by_name(const std::string& name, double epsilon) {
  if (name == "example1") return example1(epsilon);
  if (name == "example2") return example2(epsilon);
  if (name == "manufactured-sin") return manufactured_sin(epsilon);
  throw std::invalid_argument("unknown problem: " + name);
}

double inv_d_sup_on(const ProblemSpec& problem, double l, double r,
                    int degree_hint) {
  if (problem.inv_d_bound) return problem.inv_d_bound(l, r);

  const int n_samples = std::max(2 * degree_hint + 1, 33);
  const double mid = 0.5 * (l + r);
  const double rad = 0.5 * (r - l);
  double min_abs = kInf;
  for (int k = 0; k < n_samples; ++k) {
    const double x = mid + rad * std::cos(M_PI * k / (n_samples - 1));
    min_abs = std::min(min_abs, std::abs(problem.d(x)));
  }
  if (min_abs < 1e-12) return kInf;
  return 1.0 / min_abs;
}

}  // namespace hpr
