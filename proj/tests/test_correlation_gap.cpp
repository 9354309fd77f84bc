#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "stochopt/correlation_gap.hpp"
#include "stochopt/error.hpp"
#include "stochopt/generators.hpp"

using namespace stochopt;
using namespace fixtures;

namespace {

GapInstance gap2() { return GapInstance(gap2_function(), {0.5, 0.5}, {"a", "b"}); }

}  // namespace

TEST_CASE("worst case") {
  const GapInstance card(SetFunction::cardinality(3), {0.2, 0.5, 0.9});
  CHECK(worst_case_expectation(card).value == doctest::Approx(1.6));

  const auto wc = worst_case_expectation(gap2());
  CHECK(wc.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(wc.alpha[0b01] == doctest::Approx(0.5));
  CHECK(wc.alpha[0b10] == doctest::Approx(0.5));

  Rng rng(41);
  const auto f = random_coverage(4, 4, rng);
  const GapInstance sure(f, {1, 1, 1, 1});
  CHECK(worst_case_expectation(sure).value == doctest::Approx(f(0b1111)));

  CHECK_THROWS_AS(worst_case_expectation(GapInstance(SetFunction::cardinality(13), std::vector<double>(13, 0.5))), Error);
}

TEST_CASE("worst-case table satisfies the constraints") {
  Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    const auto inst = random_gap_instance(2 + rng.below(5), rng);
    const auto wc = worst_case_expectation(inst);
    double total = 0.0;
    for (double a : wc.alpha) total += a;
    CHECK(std::abs(total - 1.0) <= 1e-8);
    for (int i = 0; i < inst.size(); ++i) {
      double m = 0.0;
      for (Mask s = 0; s < wc.alpha.size(); ++s)
        if (contains(s, i)) m += wc.alpha[s];
      CHECK(std::abs(m - inst.marginals[i]) <= 1e-8);
    }
  }
}

TEST_CASE("independent expectation") {
  const GapInstance card(SetFunction::cardinality(4), {0.5, 0.5, 0.5, 0.5});
  CHECK(independent_expectation(card).value == doctest::Approx(2.0));
  CHECK(independent_expectation(gap2()).value == doctest::Approx(0.75).epsilon(1e-12));

  Rng rng(43);
  const auto f = random_coverage(4, 5, rng);
  const GapInstance fixed(f, {1, 0, 1, 0});
  CHECK(independent_expectation(fixed).value == doctest::Approx(f(0b0101)));

  IndependentOptions mc;
  mc.monte_carlo = true;
  mc.seed = 9;
  const auto est = independent_expectation(gap2(), mc);
  CHECK_FALSE(est.exact);
  CHECK(std::abs(est.value - 0.75) <= est.ci_halfwidth);
}

TEST_CASE("correlation gap") {
  const GapInstance card(SetFunction::cardinality(3), {0.2, 0.5, 0.9});
  CHECK(correlation_gap(card).kappa == doctest::Approx(1.0));

  const auto r = correlation_gap(gap2());
  CHECK(r.worst_case == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.independent == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(r.kappa == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(gap_bound(1, 1) == doctest::Approx(std::numbers::e / (std::numbers::e - 1)));
  CHECK(r.kappa <= gap_bound(1, 1));

  const GapInstance zero(gap2_function(), {0.0, 0.0});
  CHECK_THROWS_AS(correlation_gap(zero), Error);
  CHECK_THROWS_AS(GapInstance(gap2_function(), {1.5, 0.0}), Error);
}

TEST_CASE("verify_gap_bound") {
  const auto g = gap2();
  const auto cert = check_scheme(marginal_scheme(g.f), g.f);
  CHECK(verify_gap_bound(g, 1, 1, cert));

  const GapInstance card(SetFunction::cardinality(3), {0.2, 0.5, 0.9});
  CHECK(verify_gap_bound(card, 1, 1, check_scheme(marginal_scheme(card.f), card.f)));

  SchemeCheck failing;
  failing.cross_monotone = false;
  CHECK_THROWS_AS(verify_gap_bound(g, 1, 1, failing), Error);

  Rng rng(44);
  for (int t = 0; t < 200; ++t) {
    const auto inst = random_gap_instance(1 + rng.below(8), rng);
    SchemeCheckOptions opts;
    opts.max_ground = 8;
    opts.exhaustive_limit = 4;
    opts.sampled_orderings = 8;
    const auto c = check_scheme(marginal_scheme(inst.f), inst.f, opts);
    CHECK(verify_gap_bound(inst, 1, 1, c));
  }
}

TEST_CASE("split construction") {
  const SplitMap identity({1, 1});
  const auto same = split(gap2(), identity);
  CHECK(same.f.values() == gap2().f.values());
  CHECK(same.marginals == gap2().marginals);

  const GapInstance one(SetFunction::tabulate(1, [](Mask s) { return s ? 1.0 : 0.0; }), {1.0});
  const SplitMap two({2});
  const auto sp = split(one, two);
  CHECK(sp.size() == 2);
  CHECK(sp.marginals == std::vector<double>{0.5, 0.5});
  CHECK(worst_case_expectation(sp).value == doctest::Approx(1.0));
  CHECK(worst_case_expectation(one).value == doctest::Approx(1.0));
  CHECK(independent_expectation(sp).value == doctest::Approx(0.75));
  CHECK(independent_expectation(one).value == doctest::Approx(1.0));

  const auto inv = check_split_invariants(one, two);
  CHECK(inv.passed());
  CHECK(inv.split_monotone);
}

TEST_CASE("split invariants on random instances") {
  Rng rng(45);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + rng.below(3);
    const auto inst = random_gap_instance(n, rng);
    std::vector<int> copies;
    for (int i = 0; i < n; ++i) copies.push_back(1 + rng.below(3));
    const auto inv = check_split_invariants(inst, SplitMap(copies));
    CHECK_MESSAGE(inv.passed(), inv.violation);
  }
}

TEST_CASE("moving the worst case onto the split instance") {
  Rng rng(46);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + rng.below(4);
    const auto inst = random_gap_instance(n, rng);
    std::vector<int> copies(n, 1);
    copies[rng.below(n)] = 2 + rng.below(2);
    const SplitMap map(copies);
    const auto sp = split(inst, map);
    const auto wc = worst_case_expectation(inst);
    const auto moved = split_distribution(wc.alpha, map);
    double total = 0.0, value = 0.0;
    for (Mask s = 0; s < moved.size(); ++s) {
      CHECK(moved[s] >= 0.0);
      total += moved[s];
      value += moved[s] * sp.f(s);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(value == doctest::Approx(wc.value).epsilon(1e-12));
    for (int c = 0; c < sp.size(); ++c) {
      double m = 0.0;
      for (Mask s = 0; s < moved.size(); ++s)
        if (contains(s, c)) m += moved[s];
      CHECK(m == doctest::Approx(sp.marginals[c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("split scheme") {
  const auto g = gap2();
  const auto chi = marginal_scheme(g.f);
  const SplitMap map({2, 1});  // copies 0,1 of a; copy 2 of b
  const auto chi2 = split_scheme(chi, map);

  // No duplicates: same as the original under projection.
  const int order1[] = {2, 1};
  const int proj1[] = {1, 0};
  CHECK(chi2.chi(1, 0b110, order1) == chi.chi(0, 0b11, proj1));
  CHECK(chi2.chi(2, 0b110, order1) == chi.chi(1, 0b11, proj1));

  // Two copies of a: only the first in the order gets a share.
  const int order2[] = {1, 0};
  CHECK(chi2.chi(1, 0b011, order2) == 1.0);
  CHECK(chi2.chi(0, 0b011, order2) == 0.0);

  // Prefix sums of χ' equal prefix sums of χ on the induced order.
  Rng rng(47);
  const auto f = random_coverage(3, 4, rng);
  const auto base = marginal_scheme(f);
  const SplitMap m2({2, 2, 1});
  const auto s2 = split_scheme(base, m2);
  for (Mask s = 1; s < (Mask{1} << m2.split_size()); ++s) {
    std::vector<int> order = members(s);
    do {
      std::vector<int> induced;
      for (int c : order)
        if (std::find(induced.begin(), induced.end(), m2.original(c)) == induced.end()) induced.push_back(m2.original(c));
      const Mask projected = m2.project(s);
      double lhs = 0.0, rhs = 0.0;
      Mask covered = 0;
      std::size_t next = 0;
      for (int c : order) {
        lhs += s2.chi(c, s, order);
        covered |= bit(m2.original(c));
        for (; next < static_cast<std::size_t>(cardinality(covered)); ++next)
          rhs += base.chi(induced[next], projected, induced);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST_CASE("K-partition support") {
  // f = coverage where blocks {0,1} and {2,3} each cover one heavy point.
  const auto f = SetFunction::coverage({0b01, 0b01, 0b10, 0b10}, {1.0, 1.0});
  const GapInstance inst(f, {0.5, 0.5, 0.5, 0.5});
  const auto wc = worst_case_expectation(inst);
  const auto blocks = k_partition_support(wc.alpha, 4);
  if (blocks) CHECK(wc.value == doctest::Approx(k_partition_value(f, *blocks)).epsilon(1e-8));

  std::vector<double> alpha(16, 0.0);
  alpha[0b0011] = 0.5;
  alpha[0b1100] = 0.5;
  const auto b = k_partition_support(alpha, 4);
  REQUIRE(b);
  CHECK(b->size() == 2);
  alpha[0b0011] = 0.4;
  alpha[0b0001] = 0.1;
  CHECK_FALSE(k_partition_support(alpha, 4));
}
