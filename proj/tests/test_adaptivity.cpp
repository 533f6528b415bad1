#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hpr/adaptivity.hpp"
#include "test_support.hpp"

using namespace hpr;

TEST_CASE("dorfler_mark examples") {
  CHECK(dorfler_mark({9.0, 4.0, 1.0}, 0.5) == std::vector<int>{0});
  CHECK(dorfler_mark({9.0, 4.0, 1.0}, 0.01) == std::vector<int>{0});

  // Nearly all of the mass required: every element gets marked.
  const std::vector<double> equal(6, 1.0);
  CHECK(dorfler_mark(equal, 1.0 - 1e-9).size() == 6);

  CHECK(dorfler_mark({0.0, 0.0}, 0.5).empty());
  CHECK_THROWS_AS(dorfler_mark({1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dorfler_mark({1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("dorfler_mark ties break toward the smaller index") {
  const auto marked = dorfler_mark({2.0, 2.0, 2.0, 2.0}, 0.5);
  CHECK(marked == std::vector<int>{0, 1});
}

TEST_CASE("dorfler_mark minimality on random data") {
  auto& rng = hprtest::test_rng();
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::uniform_real_distribution<double> theta_dist(0.05, 0.95);
  std::uniform_int_distribution<int> size(1, 50);

  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> eta_sq(size(rng));
    for (double& v : eta_sq) {
      v = value(rng);
      if (v < 0.15) v = 0.0;        // some zero indicators
      if (v > 0.85) v = 0.5;        // inject ties
    }
    const double total = std::accumulate(eta_sq.begin(), eta_sq.end(), 0.0);
    const double theta = theta_dist(rng);
    const auto marked = dorfler_mark(eta_sq, theta);
    if (total == 0.0) {
      CHECK(marked.empty());
      continue;
    }
    REQUIRE_FALSE(marked.empty());
    double sum = 0.0;
    for (int j : marked) sum += eta_sq[j];
    CHECK(sum >= theta * total);
    CHECK(sum - eta_sq[marked.back()] < theta * total);
  }
}

TEST_CASE("smoothness indicator closed forms") {
  // Constant solution on a p = 1 element.
  HpSolution constant;
  constant.mesh = HpMesh{{0.0, 1.0}, {1}};
  constant.element_coeffs = {{2.5, 0.0}};
  CHECK(smoothness_indicator(constant, 0) == doctest::Approx(1.0).epsilon(1e-14));

  // u = x on (0,1): F = 1 / (1/sqrt3 + 1/sqrt2).
  HpSolution linear;
  linear.mesh = HpMesh{{0.0, 1.0}, {1}};
  linear.element_coeffs = {{0.5, 0.5}};
  const double expected = 1.0 / (1.0 / std::sqrt(3.0) + 1.0 / std::sqrt(2.0));
  CHECK(smoothness_indicator(linear, 0) ==
        doctest::Approx(expected).epsilon(1e-12));

  // Identically zero derivative branch (constant on p = 2).
  HpSolution flat;
  flat.mesh = HpMesh{{0.0, 0.5}, {2}};
  flat.element_coeffs = {{1.0, 0.0, 0.0}};
  CHECK(smoothness_indicator(flat, 0) == 1.0);
}

TEST_CASE("smoothness indicator range on random elements") {
  auto& rng = hprtest::test_rng();
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  std::uniform_real_distribution<double> log_h(-5.0, 0.5);
  std::uniform_int_distribution<int> degree(1, 12);
  const double lower = std::sqrt(3.0) / (std::sqrt(6.0) + 1.0);

  for (int trial = 0; trial < 400; ++trial) {
    const int p = degree(rng);
    const double h = std::pow(10.0, log_h(rng));
    HpSolution solution;
    solution.mesh = HpMesh{{0.0, h}, {p}};
    LegendreCoeffs c(p + 1);
    for (double& v : c) v = coeff(rng);
    solution.element_coeffs = {c};
    const double F = smoothness_indicator(solution, 0);
    CHECK(F >= lower - 1e-12);
    CHECK(F <= 1.0 + 1e-12);
  }
}

TEST_CASE("smoothness indicator is h-invariant") {
  // The same reference-coefficient shape on different element sizes gives
  // the same F once the chain-rule factors cancel.
  for (double h : {1e-4, 0.1, 1.0, 7.0}) {
    HpSolution solution;
    solution.mesh = HpMesh{{0.0, h}, {3}};
    solution.element_coeffs = {{0.3, -1.2, 0.8, 0.05}};
    CHECK(smoothness_indicator(solution, 0) ==
          doctest::Approx(smoothness_indicator(
                              [] {
                                HpSolution ref;
                                ref.mesh = HpMesh{{0.0, 1.0}, {3}};
                                ref.element_coeffs = {{0.3, -1.2, 0.8, 0.05}};
                                return ref;
                              }(),
                              0))
              .epsilon(1e-12));
  }
}

TEST_CASE("hp_decide") {
  CHECK(hp_decide(1.0, 0.6) == RefinementKind::RaiseDegree);
  CHECK(hp_decide(0.51, 0.6) == RefinementKind::Bisect);
  CHECK(hp_decide(0.6, 0.6) == RefinementKind::RaiseDegree);  // F >= tau
  CHECK_THROWS_AS(hp_decide(0.8, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(hp_decide(0.8, 1.0), std::invalid_argument);
}

TEST_CASE("adaptive_solve with zero iterations records the initial solve") {
  AdaptiveConfig config;
  config.max_iterations = 0;
  const auto result = adaptive_solve(example1(1e-2), config);
  REQUIRE(result.trace.entries.size() == 1);
  CHECK(result.trace.entries[0].n_elements == 10);
  CHECK(result.trace.entries[0].n_dofs == 9);
  CHECK(result.trace.entries[0].max_degree == 1);
  CHECK(result.trace.entries[0].eta_total > 0.0);
  REQUIRE(result.trace.entries[0].true_error.has_value());
}

TEST_CASE("adaptive_solve is deterministic") {
  AdaptiveConfig config;
  config.max_iterations = 12;
  const auto a = adaptive_solve(example1(1e-4), config);
  const auto b = adaptive_solve(example1(1e-4), config);
  REQUIRE(a.trace.entries.size() == b.trace.entries.size());
  for (std::size_t i = 0; i < a.trace.entries.size(); ++i) {
    const auto& ea = a.trace.entries[i];
    const auto& eb = b.trace.entries[i];
    CHECK(ea.eta_total == eb.eta_total);  // bitwise
    CHECK(ea.true_error == eb.true_error);
    CHECK(ea.mesh.breakpoints == eb.mesh.breakpoints);
    CHECK(ea.mesh.degrees == eb.mesh.degrees);
  }
}

TEST_CASE("adaptive_solve: DOFs increase and the estimate decays") {
  AdaptiveConfig config;
  config.max_iterations = 30;
  const auto result = adaptive_solve(example1(1e-4), config);
  const auto& entries = result.trace.entries;
  REQUIRE(entries.size() == 31);

  for (std::size_t i = 1; i < entries.size(); ++i)
    CHECK(entries[i].n_dofs > entries[i - 1].n_dofs);

  // Strict decay over the last 10 refinement steps.
  for (std::size_t i = entries.size() - 10; i < entries.size(); ++i)
    CHECK(entries[i].eta_total < entries[i - 1].eta_total);
}

TEST_CASE("adaptive_solve honours the degree cap") {
  AdaptiveConfig config;
  config.max_iterations = 12;
  config.max_degree = 2;
  const auto result = adaptive_solve(manufactured_sin(1.0), config);
  for (const auto& entry : result.trace.entries)
    CHECK(entry.max_degree <= 2);
}

TEST_CASE("adaptive_solve stops at the target estimate") {
  AdaptiveConfig config;
  config.max_iterations = 60;
  config.target_estimate = 1e-3;
  const auto result = adaptive_solve(manufactured_sin(1.0), config);
  CHECK(result.trace.entries.back().eta_total <= 1e-3);
  CHECK(result.trace.entries.size() < 60);
}

TEST_CASE("config validation") {
  AdaptiveConfig config;
  config.theta = 1.2;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  config.tau = 0.3;  // below sqrt3/(sqrt6+1)
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  config.initial_elements = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  CHECK_NOTHROW(config.validate());
}

TEST_CASE("solver failure carries the iteration number") {
  // d = -54/5 on (0,1) with three p = 1 elements is exactly singular.
  ProblemSpec problem;
  problem.epsilon = 1.0;
  problem.a = 0.0;
  problem.b = 1.0;
  problem.d = [](double) { return -10.8; };
  problem.f = [](double) { return 1.0; };

  AdaptiveConfig config;
  config.initial_elements = 3;
  config.max_iterations = 4;
  try {
    adaptive_solve(problem, config);
    FAIL("expected SolverError");
  } catch (const SolverError& err) {
    CHECK(err.iteration == 0);
  }
}
