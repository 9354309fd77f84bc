#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "stochopt/lp.hpp"
#include "stochopt/random.hpp"

using namespace stochopt;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

LinearProgramd make_lp(std::vector<double> c, std::vector<std::vector<double>> a, std::vector<double> b) {
  LinearProgramd lp;
  lp.objective = Eigen::Map<VectorXd>(c.data(), c.size());
  lp.constraints.resize(a.size(), c.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) lp.constraints(i, j) = a[i][j];
  lp.rhs = Eigen::Map<VectorXd>(b.data(), b.size());
  return lp;
}

// Minimum over all basic feasible points: every choice of n tight rows among
// A y ≥ b and y ≥ 0. Returns +inf when no vertex is feasible.
double vertex_oracle(const LinearProgramd& lp) {
  const int n = static_cast<int>(lp.num_variables());
  const int m = static_cast<int>(lp.num_constraints());
  MatrixXd all(m + n, n);
  VectorXd rhs(m + n);
  all << lp.constraints, MatrixXd::Identity(n, n);
  rhs << lp.rhs, VectorXd::Zero(n);
  double best = std::numeric_limits<double>::infinity();
  const int total = m + n;
  for (unsigned pick = 0; pick < (1u << total); ++pick) {
    if (__builtin_popcount(pick) != n) continue;
    MatrixXd sub(n, n);
    VectorXd sb(n);
    int k = 0;
    for (int r = 0; r < total; ++r)
      if (pick & (1u << r)) {
        sub.row(k) = all.row(r);
        sb(k++) = rhs(r);
      }
    Eigen::FullPivLU<MatrixXd> lu(sub);
    if (lu.rank() < n) continue;
    const VectorXd y = lu.solve(sb);
    if (((all * y - rhs).array() < -1e-9).any()) continue;
    best = std::min(best, lp.objective.dot(y));
  }
  return best;
}

}  // namespace

TEST_CASE("single constraint") {
  const auto r = solve_lp(make_lp({1}, {{1}}, {3}));
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.primal(0) == doctest::Approx(3));
  CHECK(r.value == doctest::Approx(3));
  CHECK(r.duals(0) == doctest::Approx(1));
}

TEST_CASE("two variables with a lower bound row") {
  const auto lp = make_lp({1, 1}, {{1, 1}, {1, 0}}, {1, 0.25});
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.value == doctest::Approx(1));
  CHECK(r.duals(0) == doctest::Approx(1));
  CHECK(r.duals(1) == doctest::Approx(0));
  CHECK(vertex_oracle(lp) == doctest::Approx(1));
}

TEST_CASE("infeasible through an upper bound") {
  auto lp = make_lp({1}, {{1}}, {1});
  lp.upper = VectorXd::Zero(1);
  CHECK(solve_lp(lp).status == LPStatus::Infeasible);
  CHECK(solve_lp(make_lp({1}, {{1}, {-1}}, {1, 0})).status == LPStatus::Infeasible);
}

TEST_CASE("unbounded") {
  CHECK(solve_lp(make_lp({-1}, {{1}}, {1})).status == LPStatus::Unbounded);
}

TEST_CASE("no constraints") {
  LinearProgramd lp;
  lp.objective = VectorXd::Ones(2);
  lp.constraints.resize(0, 2);
  lp.rhs.resize(0);
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.value == 0.0);
}

TEST_CASE("upper bound duals close the duality gap") {
  // min -y1 - y2  s.t. y1 + 2 y2 ≥ 1, y ≤ (1, 1)
  auto lp = make_lp({-1, -1}, {{1, 2}}, {1});
  lp.upper = VectorXd::Ones(2);
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.value == doctest::Approx(-2));
  CHECK(lp.rhs.dot(r.duals) - lp.upper.dot(r.upper_duals) == doctest::Approx(r.value));
}

TEST_CASE("degenerate problem terminates") {
  // Several rows tight at the origin.
  const auto r = solve_lp(make_lp({1, 1, 1}, {{1, -1, 0}, {0, 1, -1}, {-1, 0, 1}, {1, 1, 1}}, {0, 0, 0, 0}));
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.value == doctest::Approx(0));
}

TEST_CASE("size limits") {
  LinearProgramd lp;
  lp.objective = VectorXd::Ones(5000);
  lp.constraints = MatrixXd::Zero(1, 5000);
  lp.rhs = VectorXd::Zero(1);
  CHECK_THROWS_AS(solve_lp(lp), Error);
}

TEST_CASE("random LPs: duality, slackness, vertex oracle") {
  Rng rng(2024);
  int optimal = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + rng.below(4);
    const int m = 1 + rng.below(4);
    LinearProgramd lp;
    lp.objective.resize(n);
    lp.constraints.resize(m, n);
    lp.rhs.resize(m);
    for (int j = 0; j < n; ++j) lp.objective(j) = rng.uniform(-1, 3);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) lp.constraints(i, j) = std::round(rng.uniform(-3, 3));
      lp.rhs(i) = std::round(rng.uniform(-3, 3));
    }
    const auto r = solve_lp(lp);
    const double oracle = vertex_oracle(lp);
    if (r.status == LPStatus::Infeasible) {
      CHECK(std::isinf(oracle));
      continue;
    }
    if (r.status == LPStatus::Unbounded) continue;
    ++optimal;
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-7));
    const VectorXd slack = lp.constraints * r.primal - lp.rhs;
    CHECK(slack.minCoeff() >= -1e-8);
    CHECK(r.duals.minCoeff() >= -1e-9);
    CHECK(std::abs(lp.rhs.dot(r.duals) - r.value) <= 1e-7 * (1 + std::abs(r.value)));
    for (int i = 0; i < m; ++i) CHECK(r.duals(i) * slack(i) <= 1e-7);
    // dual feasibility: c - A^T z ≥ 0
    CHECK((lp.objective - lp.constraints.transpose() * r.duals).minCoeff() >= -1e-8);
  }
  CHECK(optimal > 100);
}
