#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "stochopt/distribution.hpp"
#include "stochopt/error.hpp"
#include "stochopt/generators.hpp"
#include "stochopt/oracles.hpp"

using namespace stochopt;
using namespace fixtures;

TEST_CASE("subset helpers") {
  CHECK(members(0b1011) == std::vector<int>{0, 1, 3});
  CHECK(from_members({0, 2}) == 0b101);
  CHECK(lex_less(0b001, 0b010));   // {0} < {1}
  CHECK(lex_less(0b011, 0b101));   // {0,1} < {0,2}
  CHECK(lex_less(0b001, 0b011));   // prefix first
  CHECK(format_mask(0b101, {"a", "b", "c"}) == "{a,c}");
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(ProblemInstance({"j"}, {"e"}, {-1.0}, 1.0, SetSystem{{1}}), Error);
  CHECK_THROWS_AS(ProblemInstance({"j"}, {"e"}, {1.0}, 0.5, SetSystem{{1}}), Error);
  CHECK_THROWS_AS(ProblemInstance({"j"}, {"e"}, {1.0, 2.0}, 1.0, SetSystem{{1}}), Error);
  const auto p = tri3();
  CHECK(p.feasible(0, 0));
  CHECK(p.cost(0b011) == 2.0);
}

TEST_CASE("sampling") {
  Rng rng(1);
  const auto empty = ScenarioDistribution::point_mass(2, 0);
  for (int k = 0; k < 10; ++k) CHECK(empty.sample(rng) == 0);

  const auto degenerate = ScenarioDistribution::independent({1.0, 0.0});
  for (int k = 0; k < 10; ++k) CHECK(degenerate.sample(rng) == 0b01);

  const auto half = ScenarioDistribution::independent({0.5});
  int hits = 0;
  for (int k = 0; k < 100000; ++k) hits += static_cast<int>(half.sample(rng));
  CHECK(std::abs(hits / 1e5 - 0.5) <= 0.01);

  Rng a(77), b(77);
  const auto d = random_explicit(4, 4, a);
  Rng a2(5), b2(5);
  for (int k = 0; k < 50; ++k) CHECK(d.sample(a2) == d.sample(b2));
  (void)b;
}

TEST_CASE("support enumeration") {
  const auto kp = ScenarioDistribution::k_partition(2, {0b01, 0b10});
  const auto s1 = kp.enumerate_support();
  REQUIRE(s1.size() == 2);
  CHECK(s1[0].clients == 0b01);
  CHECK(s1[0].probability == 0.5);
  CHECK(s1[1].clients == 0b10);

  const auto ind = ScenarioDistribution::independent({0.5, 0.5});
  const auto s2 = ind.enumerate_support();
  REQUIRE(s2.size() == 4);
  for (const auto& w : s2) CHECK(w.probability == 0.25);

  const auto ex = ScenarioDistribution::explicit_support(2, {{0b01, 0.3}, {0, 0.7}});
  const auto s3 = ex.enumerate_support();
  REQUIRE(s3.size() == 2);
  CHECK(s3[0].clients == 0b01);
  CHECK(s3[0].probability == 0.3);
  CHECK(s3[1].probability == 0.7);

  CHECK_THROWS_AS(ScenarioDistribution::independent(std::vector<double>(21, 0.5)).enumerate_support(), Error);
  CHECK_THROWS_AS(ScenarioDistribution::explicit_support(1, {{1, 0.5}}), Error);
  CHECK_THROWS_AS(ScenarioDistribution::k_partition(2, {0b11, 0b10}), Error);
}

TEST_CASE("support expectation agrees with sampling") {
  Rng gen(9);
  const auto dist = random_independent(4, gen);
  auto f = [](Mask s) { return static_cast<double>(cardinality(s) * cardinality(s)); };
  double exact = 0.0;
  for (const auto& w : dist.enumerate_support()) exact += w.probability * f(w.clients);
  Rng rng(10);
  double sum = 0, sq = 0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double v = f(dist.sample(rng));
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt((sq / n - mean * mean) / n);
  CHECK(std::abs(mean - exact) <= 3 * sd);
}

TEST_CASE("exact_opt") {
  const auto p = tri3();
  const auto empty = exact_opt(p, 0);
  CHECK(empty.chosen == 0);
  CHECK(empty.cost == 0.0);
  const auto s13 = exact_opt(p, 0b101);
  CHECK(s13.cost == 2.0);
  CHECK(s13.chosen == 0b011);
  CHECK(exact_opt(p, 0b101, 0b100).cost == 0.0);

  // Infeasible: a client with no covering set.
  const ProblemInstance bad({"a", "b"}, {"s"}, {1.0}, 1.0, SetSystem{{0b01}});
  CHECK_THROWS_AS(exact_opt(bad, 0b10), Error);

  Caps tight;
  tight.exact_elements = 2;
  CHECK_THROWS_AS(exact_opt(p, 0b101, 0, tight), Error);
}

TEST_CASE("exact_opt ties go to the lexicographically smallest set") {
  // Two unit sets both cover the single client.
  const ProblemInstance p({"j"}, {"s1", "s2"}, {1.0, 1.0}, 1.0, SetSystem{{1, 1}});
  CHECK(exact_opt(p, 1).chosen == 0b01);
}

TEST_CASE("subadditivity of shipped fixtures") {
  CHECK(check_subadditive(tri3()).passed);
  CHECK(check_subadditive(cov3()).passed);
  CHECK(check_subadditive(edge1()).passed);
  CHECK(check_feasibility_monotone(tri3()).passed);
}

TEST_CASE("adversarial oracle rejected") {
  // Feasible only with exactly the first element: adding elements breaks it.
  const ProblemInstance p({"j"}, {"a", "b"}, {1.0, 1.0}, 1.0,
                          CustomOracle{[](Mask f, Mask s) { return s == 0 || f == 0b01; }});
  const auto mono = check_feasibility_monotone(p);
  CHECK_FALSE(mono.passed);
  CHECK_FALSE(mono.violation.empty());
}

TEST_CASE("opt is monotone in the client set") {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_problem(static_cast<ProblemKind>(t % 4), 3, 4, 1.0, rng);
    const auto table = opt_table(p);
    for (Mask s = 0; s < table.size(); ++s)
      for (Mask t2 = s; t2 < table.size(); ++t2)
        if (is_subset(s, t2)) CHECK(table[s].cost <= table[t2].cost + kCostTolerance);
  }
}
