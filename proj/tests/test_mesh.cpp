#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hpr/mesh.hpp"
#include "test_support.hpp"

using namespace hpr;

TEST_CASE("uniform_mesh") {
  const auto m = uniform_mesh(-1.0, 1.0, 2, 1);
  CHECK(m.breakpoints == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(m.degrees == std::vector<int>{1, 1});

  const auto m10 = uniform_mesh(-1.0, 1.0, 10, 1);
  REQUIRE(m10.breakpoints.size() == 11);
  for (int j = 0; j < 10; ++j)
    CHECK(m10.length(j) == doctest::Approx(0.2).epsilon(1e-15));

  const auto single = uniform_mesh(0.0, 1.0, 1, 3);
  CHECK(single.num_elements() == 1);
  CHECK(single.degrees[0] == 3);

  CHECK_THROWS_AS(uniform_mesh(1.0, 1.0, 2, 1), std::domain_error);
  CHECK_THROWS_AS(uniform_mesh(2.0, 1.0, 2, 1), std::domain_error);
}

TEST_CASE("patch clips at the boundary") {
  const auto m = uniform_mesh(0.0, 1.0, 10, 1);
  CHECK(patch(m, 4) == std::vector<int>{3, 4, 5});
  CHECK(patch(m, 0) == std::vector<int>{0, 1});
  CHECK(patch(m, 9) == std::vector<int>{8, 9});

  const auto one = uniform_mesh(0.0, 1.0, 1, 1);
  CHECK(patch(one, 0) == std::vector<int>{0});
  CHECK_THROWS_AS(patch(m, 10), std::out_of_range);
  CHECK_THROWS_AS(patch(m, -1), std::out_of_range);
}

TEST_CASE("shape_regularity") {
  CHECK(shape_regularity(uniform_mesh(0.0, 1.0, 7, 3)) == 1.0);

  HpMesh lengths{{0.0, 0.5, 0.75}, {1, 1}};  // h = (0.5, 0.25)
  CHECK(shape_regularity(lengths) == doctest::Approx(2.0).epsilon(1e-15));

  HpMesh degrees{{0.0, 1.0, 2.0}, {2, 6}};
  CHECK(shape_regularity(degrees) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("apply_refinements basics") {
  const auto single = uniform_mesh(-1.0, 1.0, 1, 3);
  const auto bisected = apply_refinements(single, {{0, RefinementKind::Bisect}});
  CHECK(bisected.breakpoints == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(bisected.degrees == std::vector<int>{3, 3});

  const auto two = uniform_mesh(0.0, 1.0, 2, 1);
  const auto raised = apply_refinements(two, {{0, RefinementKind::RaiseDegree}});
  CHECK(raised.degrees == std::vector<int>{2, 1});
  CHECK(raised.breakpoints == two.breakpoints);

  CHECK(apply_refinements(two, {}) == two);

  CHECK_THROWS_AS(apply_refinements(two, {{0, RefinementKind::Bisect},
                                          {0, RefinementKind::RaiseDegree}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_refinements(two, {{2, RefinementKind::Bisect}}),
                  std::invalid_argument);
}

TEST_CASE("random refinement sequences keep the mesh valid") {
  auto& rng = hprtest::test_rng();
  std::uniform_real_distribution<double> uniform01(0.0, 1.0);

  HpMesh mesh = uniform_mesh(-1.0, 1.0, 3, 2);
  for (int step = 0; step < 1000; ++step) {
    std::vector<RefinementDecision> decisions;
    for (int j = 0; j < mesh.num_elements(); ++j) {
      const double roll = uniform01(rng);
      if (roll < 0.15)
        decisions.push_back({j, RefinementKind::Bisect});
      else if (roll < 0.3)
        decisions.push_back({j, RefinementKind::RaiseDegree});
    }
    const auto next = apply_refinements(mesh, decisions);

    REQUIRE(next.breakpoints.size() == next.degrees.size() + 1);
    for (std::size_t i = 0; i + 1 < next.breakpoints.size(); ++i)
      REQUIRE(next.breakpoints[i] < next.breakpoints[i + 1]);
    for (int p : next.degrees) REQUIRE(p >= 1);
    CHECK(next.breakpoints.front() == mesh.breakpoints.front());
    CHECK(next.breakpoints.back() == mesh.breakpoints.back());

    // Bisection splits into equal halves up to rounding.
    for (const auto& decision : decisions) {
      if (decision.kind != RefinementKind::Bisect) continue;
      const double h = mesh.length(decision.element);
      int child = decision.element;
      for (const auto& earlier : decisions)
        if (earlier.kind == RefinementKind::Bisect &&
            earlier.element < decision.element)
          ++child;
      REQUIRE(std::abs(next.length(child) - 0.5 * h) <= 1e-16 + 1e-15 * h);
      REQUIRE(std::abs(next.length(child + 1) - 0.5 * h) <= 1e-16 + 1e-15 * h);
    }

    if (next.num_elements() < 600) mesh = next;
  }
}
