#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "stochopt/det_solvers.hpp"
#include "stochopt/distribution.hpp"
#include "stochopt/random.hpp"

namespace stochopt {

/// First-stage purchase plus the rule that completes it once S is revealed.
struct TwoStagePolicy {
  Mask boosted = 0;      // D, the client set the first stage was built for
  Solution first_stage;  // F_0
  std::function<Solution(Mask)> recourse;

  /// c(F_0) + σ·c(F_S) for the realised S.
  double realized_cost(const ProblemInstance& problem, Mask realized) const {
    return first_stage.cost + problem.sigma() * recourse(realized).cost;
  }
};

inline int boost_rounds(double sigma) { return static_cast<int>(sigma); }
inline double boosted_probability(double marginal, double sigma) { return marginal * sigma < 1.0 ? marginal * sigma : 1.0; }

/// Boost-and-Sample: ⌊σ⌋ independent draws D_1..D_k, F_0 = alg(∪D_i); a
/// realised S is served by augmenting F_0 to D ∪ S.
TwoStagePolicy boost_and_sample(const ProblemInstance& problem, const ApproxAlgorithm& alg,
                                const ScenarioDistribution& dist, Rng& rng);
TwoStagePolicy boost_and_sample_from_draws(const ProblemInstance& problem, const ApproxAlgorithm& alg,
                                           std::span<const Mask> draws);

/// Ind-Boost: D keeps client j with probability min(1, σπ_j); recourse is
/// the union over j ∈ S of the augmentations of F_0 to D ∪ {j}.
TwoStagePolicy ind_boost(const ProblemInstance& problem, const ApproxAlgorithm& alg, std::span<const double> marginals,
                         double sigma, Rng& rng);
TwoStagePolicy ind_boost_from_boosted(const ProblemInstance& problem, const ApproxAlgorithm& alg, Mask boosted);

enum class Strategy { BoostAndSample, IndBoost };
enum class EvalMode { Exact, MonteCarlo };

const char* to_string(Strategy s);
const char* to_string(EvalMode m);

struct EvaluationOptions {
  EvalMode mode = EvalMode::Exact;
  long runs = 10000;  // Monte Carlo replications, at least 10^4
  std::uint64_t seed = 0;
  long draw_cap = 1'000'000;
  int support_cap = kDefaultSupportCap;
};

struct PolicyEvaluation {
  double expected_cost = 0.0;
  double first_stage_cost = 0.0;  // E[c(F_0)]
  double recourse_cost = 0.0;     // E[σ c(F_S)]
  EvalMode mode = EvalMode::Exact;
  double ci_halfwidth = 0.0;  // 99% half-width, Monte Carlo only
  long runs = 0;              // enumerated outcomes or replications
};

/// Expected total cost of a strategy. Exact mode integrates over every
/// boosting outcome and every realisation; Monte Carlo mode returns the
/// sample mean of independent end-to-end runs.
PolicyEvaluation evaluate_policy(const ProblemInstance& problem, const ApproxAlgorithm& alg,
                                 const ScenarioDistribution& dist, Strategy strategy, const EvaluationOptions& opts);

struct TwoStageOptimum {
  double value = 0.0;  // Z*
  Solution first_stage;
};

/// Z* = min over F_0 ⊆ X of c(F_0) + σ Σ_S π(S) c(cheapest completion of F_0 for S).
TwoStageOptimum exact_two_stage_opt(const ProblemInstance& problem, const ScenarioDistribution& dist,
                                    const Caps& caps = {}, long work_cap = 1'000'000);

/// Joint law of (D, S) as a table keyed by (D, S).
using JointLaw = std::map<std::pair<Mask, Mask>, double>;

/// D = union of `rounds` draws, S one more independent draw.
JointLaw boosted_joint_law(std::span<const WeightedScenario> support, int rounds);
/// rounds+1 draws, one index t uniform: S = draw t, D = union of the rest.
JointLaw holdout_joint_law(std::span<const WeightedScenario> support, int rounds);
double max_abs_difference(const JointLaw& a, const JointLaw& b);

/// F_0 ∪ recourse(S) ∈ Sols(S) for every S in `support`.
bool policy_feasible(const ProblemInstance& problem, const TwoStagePolicy& policy,
                     std::span<const WeightedScenario> support);

}  // namespace stochopt
