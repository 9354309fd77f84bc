#include <doctest.h>

#include <cmath>

#include "stochopt/error.hpp"
#include "stochopt/generators.hpp"
#include "stochopt/oracles.hpp"
#include "stochopt/saa.hpp"

using namespace stochopt;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// min price·r s.t. r ≥ 1 - x.
ScenarioBlock shortfall(double price, double probability = 1.0) {
  ScenarioBlock b;
  b.probability = probability;
  b.recourse_cost = VectorXd::Constant(1, price);
  b.assignment_cost = VectorXd::Zero(0);
  b.assignment_matrix = MatrixXd::Zero(1, 0);
  b.technology = MatrixXd::Ones(1, 1);
  b.requirement = VectorXd::Ones(1);
  return b;
}

VectorXd point(std::initializer_list<double> v) {
  VectorXd x(v.size());
  int k = 0;
  for (double d : v) x(k++) = d;
  return x;
}

VectorXd random_point(int m, Rng& rng) {
  VectorXd x(m);
  for (int i = 0; i < m; ++i) x(i) = rng.uniform();
  return x;
}

}  // namespace

TEST_CASE("instance validation") {
  auto neg = shortfall(1.0);
  neg.technology(0, 0) = -1.0;
  CHECK_THROWS_AS(StochasticLPInstance(VectorXd::Ones(1), {neg}), Error);
  CHECK_THROWS_AS(StochasticLPInstance(VectorXd::Ones(1), {shortfall(1.0, 0.5)}), Error);
  const StochasticLPInstance inst(VectorXd::Ones(1), {shortfall(3.0)});
  CHECK(inst.lambda() == 3.0);
  CHECK(inst.radius() == 1.0);
}

TEST_CASE("recourse values") {
  const StochasticLPInstance inst(VectorXd::Ones(1), {shortfall(1.0)});
  const auto r = recourse_value(inst, 0, point({0.25}));
  CHECK(r.value == doctest::Approx(0.75));
  CHECK(r.duals(0) == doctest::Approx(1.0));
  CHECK(recourse_value(inst, 0, point({1.0})).value == doctest::Approx(0.0));

  // Infeasible block: a requirement with no way to meet it.
  ScenarioBlock stuck = shortfall(1.0);
  stuck.technology = MatrixXd::Zero(1, 1);
  stuck.label = "stuck";
  const StochasticLPInstance bad(VectorXd::Ones(1), {stuck});
  try {
    recourse_value(bad, 0, point({0.0}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
    CHECK(std::string(e.what()).find("stuck") != std::string::npos);
  }
}

TEST_CASE("h_exact") {
  const StochasticLPInstance none(point({2.0, 1.0}), {});
  CHECK(h_exact(none, point({0.5, 0.5})) == doctest::Approx(1.5));

  const StochasticLPInstance single(VectorXd::Ones(1), {shortfall(2.0)});
  CHECK(h_exact(single, point({0.25})) == doctest::Approx(0.25 + 1.5));

  const StochasticLPInstance a(VectorXd::Ones(1), {shortfall(2.0)});
  const StochasticLPInstance b(VectorXd::Ones(1), {shortfall(4.0)});
  const StochasticLPInstance both(VectorXd::Ones(1), {shortfall(2.0, 0.5), shortfall(4.0, 0.5)});
  const VectorXd x = point({0.3});
  CHECK(h_exact(both, x) == doctest::Approx(0.5 * (h_exact(a, x) + h_exact(b, x))));
}

TEST_CASE("subgradients") {
  const StochasticLPInstance none(point({2.0, 1.0}), {});
  CHECK(subgradient_at(none, point({0.1, 0.2})).d.isApprox(point({2.0, 1.0})));

  const StochasticLPInstance flat(VectorXd::Ones(1), {shortfall(1.0)});
  CHECK(subgradient_at(flat, point({0.4})).d(0) == doctest::Approx(0.0));

  Rng rng(31);
  for (int t = 0; t < 5; ++t) {
    const auto inst = random_stochastic_lp(2, 3, rng);
    for (int k = 0; k < 100; ++k) {
      const VectorXd x = random_point(2, rng), y = random_point(2, rng);
      const auto g = subgradient_at(inst, x);
      CHECK(h_exact(inst, y) - h_exact(inst, x) >= g.d.dot(y - x) - 1e-7);
      CHECK(g.d.norm() <= inst.lipschitz_bound() + 1e-9);
    }
  }
}

TEST_CASE("convexity and Lipschitz bound") {
  Rng rng(32);
  for (int t = 0; t < 5; ++t) {
    const auto inst = random_stochastic_lp(3, 4, rng);
    for (int k = 0; k < 20; ++k) {
      const VectorXd x = random_point(3, rng), y = random_point(3, rng);
      const double hx = h_exact(inst, x), hy = h_exact(inst, y);
      CHECK(h_exact(inst, 0.5 * (x + y)) <= 0.5 * (hx + hy) + 1e-7);
      CHECK(std::abs(hx - hy) <= inst.lipschitz_bound() * (x - y).norm() + 1e-7);
    }
  }
}

TEST_CASE("empirical subgradients are unbiased") {
  Rng gen(33);
  const auto inst = random_stochastic_lp(2, 3, gen);
  const VectorXd x = point({0.3, 0.6});
  const VectorXd exact = subgradient_at(inst, x).d;
  const int reps = 1000;
  VectorXd sum = VectorXd::Zero(2), sq = VectorXd::Zero(2);
  Rng rng(34);
  for (int k = 0; k < reps; ++k) {
    const auto sample = build_sample_average(inst, 20, rng);
    const VectorXd d = subgradient_at(sample, x).d;
    sum += d;
    sq += d.cwiseProduct(d);
  }
  const VectorXd mean = sum / reps;
  for (int i = 0; i < 2; ++i) {
    const double sd = std::sqrt(std::max(0.0, sq(i) / reps - mean(i) * mean(i)) / reps);
    CHECK(std::abs(mean(i) - exact(i)) <= 3 * sd + 1e-12);
  }
}

TEST_CASE("sample size") {
  const auto base = sample_size(2, 2, 1, 1, 0.1, 0.1, 0.2);
  CHECK(base.levels == 5);
  CHECK(sample_size(2, 2, 1, 1, 0.1, 0.05, 0.2).samples >= base.samples);
  const auto doubled = sample_size(2, 4, 1, 1, 0.1, 0.1, 0.2);
  CHECK(doubled.leading_factor / base.leading_factor == doctest::Approx(25.0 / 9.0).epsilon(1e-14));
  CHECK(base.omega == doctest::Approx(0.005));
  // Frozen from the first run; checked by hand: 480000 · ln(4 · n / 0.1).
  CHECK(base.samples == 12050541.0);
}

TEST_CASE("sample average weights") {
  Rng rng(35);
  const StochasticLPInstance single(VectorXd::Ones(1), {shortfall(2.0)});
  CHECK(build_sample_average(single, 17, rng).scenarios().front().probability == 1.0);

  const StochasticLPInstance two(VectorXd::Ones(1), {shortfall(2.0, 0.5), shortfall(4.0, 0.5)});
  const auto sampled = build_sample_average(two, 10000, rng);
  REQUIRE(sampled.scenarios().size() == 2);
  CHECK(std::abs(sampled.scenarios()[0].probability - 0.5) <= 0.02);

  Rng a(7), b(7);
  CHECK(build_sample_average(two, 100, a).probabilities() == build_sample_average(two, 100, b).probabilities());
}

TEST_CASE("minimize") {
  const StochasticLPInstance none(point({1.0, 2.0}), {});
  const auto r0 = minimize(none);
  CHECK(r0.x.norm() <= 1e-9);

  const StochasticLPInstance ramp(VectorXd::Ones(1), {shortfall(2.0)});
  const auto r1 = minimize(ramp);
  CHECK(r1.x(0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-3));

  Rng rng(36);
  for (int t = 0; t < 10; ++t) {
    const auto inst = random_stochastic_lp(1 + t % 3, 2 + t % 3, rng);
    const auto de = solve_deterministic_equivalent(inst);
    CHECK(h_exact(inst, de.x) == doctest::Approx(de.value).epsilon(1e-9));
    const auto r = minimize(inst);
    CHECK(std::abs(r.value - de.value) <= 1e-3);
  }
}

TEST_CASE("extended grid") {
  GridSpec spec;
  spec.epsilon = 1.0;
  spec.lipschitz = 1.0;
  spec.radius = 2.0;
  CHECK(spec.spacing(1) == 0.5);
  const auto base = base_grid(spec.spacing(1), Polytope{}, 1);
  REQUIRE(base.size() == 3);
  CHECK(base[1](0) == 0.5);

  GridSpec s2;
  s2.epsilon = 0.5;
  s2.lipschitz = 1.0;
  s2.radius = std::sqrt(2.0);
  const int m = 2;
  const auto g = base_grid(s2.spacing(m), Polytope{}, m);
  Rng rng(37);
  const double reach = s2.epsilon / (s2.lipschitz * s2.levels());
  for (int k = 0; k < 1000; ++k) {
    const VectorXd x = random_point(m, rng);
    double best = 1e9;
    for (const auto& p : g) best = std::min(best, (p - x).norm());
    CHECK(best <= reach + 1e-12);
  }
  const auto ext = extended_grid(s2, Polytope{}, m);
  CHECK(ext.size() >= g.size());
  CHECK(std::log(static_cast<double>(ext.size())) <= log_grid_bound(s2, m));

  GridSpec fine;
  fine.epsilon = 1e-3;
  CHECK_THROWS_AS(extended_grid(fine, Polytope{}, 3), Error);
}

TEST_CASE("grid respects polytope rows") {
  Polytope half;
  half.rows = MatrixXd::Constant(1, 2, -1.0);  // x1 + x2 ≤ 1
  half.rhs = VectorXd::Constant(1, -1.0);
  for (const auto& p : base_grid(0.25, half, 2)) CHECK(p.sum() <= 1 + 1e-12);
  const VectorXd proj = half.project(point({1.0, 1.0}));
  CHECK(proj.isApprox(point({0.5, 0.5}), 1e-9));
}

TEST_CASE("omega subgradients") {
  Rng gen(38);
  const auto inst = random_stochastic_lp(2, 3, gen);
  auto h = [&](const VectorXd& x) { return h_exact(inst, x); };
  const VectorXd x = point({0.4, 0.4});
  const VectorXd d = subgradient_at(inst, x).d;
  Rng rng(39);
  CHECK(check_omega_subgradient(h, x, d, 0.0, Polytope{}, 200, rng).holds);

  const double omega = 0.1;
  const VectorXd lowered = d - 0.5 * omega * inst.first_stage_cost();
  CHECK(check_omega_subgradient(h, x, lowered, omega, Polytope{}, 200, rng).holds);

  // Increasing linear h; an inflated slope fails towards larger y.
  const StochasticLPInstance linear(point({1.0, 1.0}), {});
  auto hl = [&](const VectorXd& y) { return h_exact(linear, y); };
  const auto bad = check_omega_subgradient(hl, point({0.1, 0.1}), point({3.0, 3.0}), 0.0, Polytope{}, 200, rng);
  CHECK_FALSE(bad.holds);
  CHECK(bad.witness.size() == 2);
}

TEST_CASE("facility location encoding") {
  TwoStageUfl one;
  one.first_stage_opening = VectorXd::Ones(1);
  one.distance = MatrixXd::Ones(1, 1);
  one.scenarios = {{1.0, {0}, VectorXd::Ones(1)}};
  const auto inst = encode_ufl(one);
  CHECK(inst.scenarios().front().requirement.size() == 2);
  CHECK(recourse_value(inst, 0, point({1.0})).value == doctest::Approx(1.0));
  CHECK(recourse_value(inst, 0, point({0.0})).value == doctest::Approx(2.0));
}

TEST_CASE("facility location encoding matches the integer optimum at x = 0") {
  // Two facilities, two clients; each scenario solved exactly over the
  // client-element form with the scenario's opening prices.
  TwoStageUfl ufl;
  ufl.first_stage_opening = point({1.0, 1.5});
  ufl.distance.resize(2, 2);
  ufl.distance << 0.2, 1.0, 0.9, 0.3;
  ufl.scenarios = {{0.5, {0, 1}, point({2.0, 2.5})}, {0.3, {0}, point({1.5, 1.0})}, {0.2, {1}, point({3.0, 0.5})}};
  const auto inst = encode_ufl(ufl);
  double brute = 0.0;
  for (const auto& sc : ufl.scenarios) {
    FacilityLocation fl{{0, 1}, {}};
    std::vector<double> costs{sc.opening_cost(0), sc.opening_cost(1)};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        fl.links.push_back({static_cast<int>(costs.size()), i, j});
        costs.push_back(ufl.distance(i, j));
      }
    const ProblemInstance p({"c1", "c2"}, {"f1", "f2", "l11", "l12", "l21", "l22"}, costs, 1.0, fl);
    brute += sc.probability * exact_opt(p, from_members(sc.clients)).cost;
  }
  CHECK(h_exact(inst, VectorXd::Zero(2)) == doctest::Approx(brute).epsilon(1e-7));
}
