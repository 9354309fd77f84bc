#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "stochopt/lp.hpp"

namespace stochopt {

/// One scenario A of the two-stage LP:
///   f_A(x) = min { w^A·r + q^A·s : D^A s + T^A r ≥ j^A - T^A x, r, s ≥ 0 }.
struct ScenarioBlock {
  double probability = 0.0;
  Eigen::VectorXd recourse_cost;      // w^A, one per first-stage coordinate
  Eigen::VectorXd assignment_cost;    // q^A
  Eigen::MatrixXd assignment_matrix;  // D^A
  Eigen::MatrixXd technology;         // T^A, entrywise ≥ 0
  Eigen::VectorXd requirement;        // j^A
  std::string label;
};

/// The box [0,1]^m intersected with optional rows A x ≥ b.
struct Polytope {
  Eigen::MatrixXd rows;
  Eigen::VectorXd rhs;

  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
  /// Euclidean projection (Dykstra's alternating projections when rows are
  /// present, plain clipping otherwise).
  Eigen::VectorXd project(const Eigen::VectorXd& x) const;
};

class StochasticLPInstance {
 public:
  /// `radius` ≤ 0 selects √m, the radius of the unit box.
  StochasticLPInstance(Eigen::VectorXd first_stage_cost, std::vector<ScenarioBlock> scenarios, Polytope polytope = {},
                       double radius = 0.0);

  int dimension() const { return static_cast<int>(first_stage_cost_.size()); }
  const Eigen::VectorXd& first_stage_cost() const { return first_stage_cost_; }
  const std::vector<ScenarioBlock>& scenarios() const { return scenarios_; }
  const Polytope& polytope() const { return polytope_; }
  double radius() const { return radius_; }

  /// λ = max(1, max over scenarios and coordinates of w^A_e / w^I_e).
  double lambda() const { return lambda_; }
  /// λ‖w^I‖, the Lipschitz bound on h.
  double lipschitz_bound() const { return lambda_ * first_stage_cost_.norm(); }

  std::vector<double> probabilities() const;
  /// Same blocks, new scenario weights (which must sum to 1).
  StochasticLPInstance reweighted(std::span<const double> weights) const;

 private:
  Eigen::VectorXd first_stage_cost_;
  std::vector<ScenarioBlock> scenarios_;
  Polytope polytope_;
  double radius_;
  double lambda_;
};

struct RecourseValue {
  double value = 0.0;
  Eigen::VectorXd duals;  // z*_A, one per scenario row
};

/// Solves the recourse LP of one scenario at first-stage point x.
RecourseValue recourse_value(const StochasticLPInstance& instance, std::size_t scenario, const Eigen::VectorXd& x);

/// h(x) = w^I·x + Σ_A p_A f_A(x).
double h_exact(const StochasticLPInstance& instance, const Eigen::VectorXd& x);

struct SubgradientVector {
  Eigen::VectorXd d;
  double omega = 0.0;  // 0 for an exact subgradient
  double value = 0.0;  // the function value at x, computed on the way
};

/// d = w^I - Σ_A weight_A (T^A)^T z*_A. With the instance's own
/// probabilities this is a subgradient of h; with empirical weights, of ĥ.
SubgradientVector subgradient_at(const StochasticLPInstance& instance, const Eigen::VectorXd& x,
                                 std::span<const double> weights);
SubgradientVector subgradient_at(const StochasticLPInstance& instance, const Eigen::VectorXd& x);

struct DeterministicEquivalent {
  double value = 0.0;
  Eigen::VectorXd x;
};

/// min_x h(x) over the polytope as one LP with every scenario's recourse
/// variables expanded.
DeterministicEquivalent solve_deterministic_equivalent(const StochasticLPInstance& instance);

}  // namespace stochopt
