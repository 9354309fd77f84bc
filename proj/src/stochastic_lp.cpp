#include "stochopt/stochastic_lp.hpp"

#include <cmath>
#include <limits>

#include "stochopt/error.hpp"

namespace stochopt {

using Eigen::MatrixXd;
using Eigen::VectorXd;

bool Polytope::contains(const VectorXd& x, double tol) const {
  if ((x.array() < -tol).any() || (x.array() > 1.0 + tol).any()) return false;
  if (rows.rows() == 0) return true;
  return ((rows * x - rhs).array() >= -tol).all();
}

VectorXd Polytope::project(const VectorXd& x) const {
  auto clip = [](const VectorXd& v) { return v.cwiseMax(0.0).cwiseMin(1.0).eval(); };
  if (rows.rows() == 0) return clip(x);
  // Dykstra over the box and each halfspace a·x ≥ b.
  const Eigen::Index sets = rows.rows() + 1;
  std::vector<VectorXd> corrections(sets, VectorXd::Zero(x.size()));
  VectorXd current = x;
  for (int sweep = 0; sweep < 5000; ++sweep) {
    const VectorXd before = current;
    for (Eigen::Index k = 0; k < sets; ++k) {
      const VectorXd shifted = current + corrections[k];
      VectorXd projected;
      if (k == 0) {
        projected = clip(shifted);
      } else {
        const auto a = rows.row(k - 1).transpose();
        const double gap = rhs(k - 1) - a.dot(shifted);
        const double norm2 = a.squaredNorm();
        projected = (gap > 0.0 && norm2 > 0.0) ? (shifted + (gap / norm2) * a).eval() : shifted;
      }
      corrections[k] = shifted - projected;
      current = projected;
    }
    if ((current - before).norm() < 1e-13) break;
  }
  return current;
}

StochasticLPInstance::StochasticLPInstance(VectorXd first_stage_cost, std::vector<ScenarioBlock> scenarios,
                                           Polytope polytope, double radius)
    : first_stage_cost_(std::move(first_stage_cost)),
      scenarios_(std::move(scenarios)),
      polytope_(std::move(polytope)) {
  const Eigen::Index m = first_stage_cost_.size();
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "stochastic LP needs at least one first-stage variable");
  if (!first_stage_cost_.allFinite() || (first_stage_cost_.array() < 0.0).any())
    throw Error(ErrorKind::InvalidArgument, "first-stage costs must be finite and nonnegative");
  if (polytope_.rows.rows() != polytope_.rhs.size() || (polytope_.rows.rows() > 0 && polytope_.rows.cols() != m))
    throw Error(ErrorKind::InvalidArgument, "polytope rows do not match the first-stage dimension");
  radius_ = radius > 0.0 ? radius : std::sqrt(static_cast<double>(m));

  double total = 0.0;
  lambda_ = 1.0;
  for (const auto& s : scenarios_) {
    const Eigen::Index rows = s.requirement.size();
    const std::string who = "scenario '" + s.label + "': ";
    if (!(s.probability >= 0.0)) throw Error(ErrorKind::InvalidArgument, who + "negative probability");
    if (s.recourse_cost.size() != m || s.technology.rows() != rows || s.technology.cols() != m ||
        s.assignment_matrix.rows() != rows || s.assignment_matrix.cols() != s.assignment_cost.size())
      throw Error(ErrorKind::InvalidArgument, who + "block dimensions are inconsistent");
    if ((s.technology.array() < 0.0).any()) throw Error(ErrorKind::InvalidArgument, who + "T must be entrywise nonnegative");
    if (!s.recourse_cost.allFinite() || !s.assignment_cost.allFinite() || !s.assignment_matrix.allFinite() ||
        !s.technology.allFinite() || !s.requirement.allFinite())
      throw Error(ErrorKind::InvalidArgument, who + "non-finite data");
    total += s.probability;
    for (Eigen::Index e = 0; e < m; ++e) {
      const double wi = first_stage_cost_(e);
      const double wa = s.recourse_cost(e);
      if (wi > 0.0) lambda_ = std::max(lambda_, wa / wi);
      else if (wa > 0.0) lambda_ = std::numeric_limits<double>::infinity();
    }
  }
  if (!scenarios_.empty() && std::abs(total - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, "scenario probabilities sum to " + std::to_string(total));
}

std::vector<double> StochasticLPInstance::probabilities() const {
  std::vector<double> p;
  for (const auto& s : scenarios_) p.push_back(s.probability);
  return p;
}

StochasticLPInstance StochasticLPInstance::reweighted(std::span<const double> weights) const {
  if (weights.size() != scenarios_.size()) throw Error(ErrorKind::InvalidArgument, "one weight per scenario is required");
  auto blocks = scenarios_;
  for (std::size_t a = 0; a < blocks.size(); ++a) blocks[a].probability = weights[a];
  return StochasticLPInstance(first_stage_cost_, std::move(blocks), polytope_, radius_);
}

RecourseValue recourse_value(const StochasticLPInstance& instance, std::size_t scenario, const VectorXd& x) {
  const ScenarioBlock& s = instance.scenarios().at(scenario);
  const Eigen::Index m = instance.dimension();
  const Eigen::Index ns = s.assignment_cost.size();
  LinearProgramd lp;
  lp.objective.resize(m + ns);
  lp.objective << s.recourse_cost, s.assignment_cost;
  lp.constraints.resize(s.requirement.size(), m + ns);
  lp.constraints << s.technology, s.assignment_matrix;
  lp.rhs = s.requirement - s.technology * x;
  const LPResultd r = solve_lp(lp);
  if (r.status != LPStatus::Optimal)
    throw Error(r.status == LPStatus::Infeasible ? ErrorKind::Infeasible : ErrorKind::Unbounded,
                "recourse LP of scenario '" + s.label + "' (#" + std::to_string(scenario) + ") is " + to_string(r.status));
  return {r.value, r.duals};
}

SubgradientVector subgradient_at(const StochasticLPInstance& instance, const VectorXd& x,
                                 std::span<const double> weights) {
  if (weights.size() != instance.scenarios().size())
    throw Error(ErrorKind::InvalidArgument, "one weight per scenario is required");
  SubgradientVector out;
  out.d = instance.first_stage_cost();
  out.value = instance.first_stage_cost().dot(x);
  for (std::size_t a = 0; a < weights.size(); ++a) {
    if (weights[a] == 0.0) continue;
    const RecourseValue rv = recourse_value(instance, a, x);
    out.d.noalias() -= weights[a] * (instance.scenarios()[a].technology.transpose() * rv.duals);
    out.value += weights[a] * rv.value;
  }
  return out;
}

SubgradientVector subgradient_at(const StochasticLPInstance& instance, const VectorXd& x) {
  const auto p = instance.probabilities();
  return subgradient_at(instance, x, p);
}

double h_exact(const StochasticLPInstance& instance, const VectorXd& x) {
  double value = instance.first_stage_cost().dot(x);
  for (std::size_t a = 0; a < instance.scenarios().size(); ++a) {
    const double p = instance.scenarios()[a].probability;
    if (p != 0.0) value += p * recourse_value(instance, a, x).value;
  }
  return value;
}

DeterministicEquivalent solve_deterministic_equivalent(const StochasticLPInstance& instance) {
  const Eigen::Index m = instance.dimension();
  Eigen::Index vars = m, rows = instance.polytope().rows.rows();
  for (const auto& s : instance.scenarios()) {
    vars += m + s.assignment_cost.size();
    rows += s.requirement.size();
  }
  LinearProgramd lp;
  lp.objective = VectorXd::Zero(vars);
  lp.constraints = MatrixXd::Zero(rows, vars);
  lp.rhs = VectorXd::Zero(rows);
  lp.upper = VectorXd::Constant(vars, std::numeric_limits<double>::infinity());
  lp.objective.head(m) = instance.first_stage_cost();
  lp.upper.head(m).setOnes();

  Eigen::Index col = m, row = 0;
  for (const auto& s : instance.scenarios()) {
    const Eigen::Index ns = s.assignment_cost.size();
    const Eigen::Index k = s.requirement.size();
    lp.objective.segment(col, m) = s.probability * s.recourse_cost;
    lp.objective.segment(col + m, ns) = s.probability * s.assignment_cost;
    lp.constraints.block(row, 0, k, m) = s.technology;
    lp.constraints.block(row, col, k, m) = s.technology;
    lp.constraints.block(row, col + m, k, ns) = s.assignment_matrix;
    lp.rhs.segment(row, k) = s.requirement;
    col += m + ns;
    row += k;
  }
  const auto& poly = instance.polytope();
  if (poly.rows.rows() > 0) {
    lp.constraints.block(row, 0, poly.rows.rows(), m) = poly.rows;
    lp.rhs.segment(row, poly.rows.rows()) = poly.rhs;
  }
  const LPResultd r = solve_lp(lp);
  if (r.status != LPStatus::Optimal)
    throw Error(r.status == LPStatus::Infeasible ? ErrorKind::Infeasible : ErrorKind::Unbounded,
                std::string("deterministic equivalent is ") + to_string(r.status));
  return {r.value, r.primal.head(m)};
}

}  // namespace stochopt
