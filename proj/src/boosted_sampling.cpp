#include "stochopt/boosted_sampling.hpp"

#include <cmath>
#include <memory>
#include <unordered_map>

#include "stochopt/error.hpp"

namespace stochopt {

const char* to_string(Strategy s) { return s == Strategy::BoostAndSample ? "boost-and-sample" : "ind-boost"; }
const char* to_string(EvalMode m) { return m == EvalMode::Exact ? "exact" : "monte_carlo"; }

TwoStagePolicy boost_and_sample_from_draws(const ProblemInstance& problem, const ApproxAlgorithm& alg,
                                           std::span<const Mask> draws) {
  Mask boosted = 0;
  for (Mask d : draws) boosted |= d;
  TwoStagePolicy policy;
  policy.boosted = boosted;
  policy.first_stage = alg.solve(problem, boosted);
  const Mask f0 = policy.first_stage.chosen;
  policy.recourse = [&problem, alg, f0, boosted](Mask realized) { return alg.augment(problem, f0, boosted | realized); };
  return policy;
}

TwoStagePolicy boost_and_sample(const ProblemInstance& problem, const ApproxAlgorithm& alg,
                                const ScenarioDistribution& dist, Rng& rng) {
  std::vector<Mask> draws(boost_rounds(problem.sigma()));
  for (auto& d : draws) d = dist.sample(rng);
  return boost_and_sample_from_draws(problem, alg, draws);
}

TwoStagePolicy ind_boost_from_boosted(const ProblemInstance& problem, const ApproxAlgorithm& alg, Mask boosted) {
  TwoStagePolicy policy;
  policy.boosted = boosted;
  policy.first_stage = alg.solve(problem, boosted);
  const Mask f0 = policy.first_stage.chosen;
  // Per-client augmentations depend only on (D, j); memoise them across calls.
  auto cache = std::make_shared<std::unordered_map<int, Mask>>();
  policy.recourse = [&problem, alg, f0, boosted, cache](Mask realized) {
    Mask added = 0;
    for (int j : members(realized & ~boosted)) {
      auto it = cache->find(j);
      if (it == cache->end()) it = cache->emplace(j, alg.augment(problem, f0, boosted | bit(j)).chosen).first;
      added |= it->second;
    }
    return problem.make_solution(added);
  };
  return policy;
}

TwoStagePolicy ind_boost(const ProblemInstance& problem, const ApproxAlgorithm& alg, std::span<const double> marginals,
                         double sigma, Rng& rng) {
  if (static_cast<int>(marginals.size()) != problem.num_clients())
    throw Error(ErrorKind::InvalidArgument, "one marginal per client is required");
  Mask boosted = 0;
  for (int j = 0; j < problem.num_clients(); ++j)
    if (rng.bernoulli(boosted_probability(marginals[j], sigma))) boosted |= bit(j);
  return ind_boost_from_boosted(problem, alg, boosted);
}

namespace {

/// Expected cost of a built policy against the full realisation support.
void accumulate(const ProblemInstance& problem, const TwoStagePolicy& policy,
                std::span<const WeightedScenario> support, double weight, PolicyEvaluation& out) {
  double recourse = 0.0;
  for (const auto& s : support) recourse += s.probability * problem.sigma() * policy.recourse(s.clients).cost;
  out.first_stage_cost += weight * policy.first_stage.cost;
  out.recourse_cost += weight * recourse;
}

PolicyEvaluation exact_boost_and_sample(const ProblemInstance& problem, const ApproxAlgorithm& alg,
                                        const ScenarioDistribution& dist, const EvaluationOptions& opts) {
  const auto support = dist.enumerate_support(opts.support_cap);
  const int rounds = boost_rounds(problem.sigma());
  const double outcomes = std::pow(static_cast<double>(support.size()), rounds);
  if (outcomes > static_cast<double>(opts.draw_cap))
    throw Error(ErrorKind::CapExceeded, "exact evaluation would enumerate " + std::to_string(outcomes) + " draw tuples");

  // Probability of each boosted union D, then one policy per distinct D.
  std::map<Mask, double> law_of_union;
  std::vector<std::size_t> index(rounds, 0);
  for (;;) {
    Mask boosted = 0;
    double p = 1.0;
    for (std::size_t k : index) {
      boosted |= support[k].clients;
      p *= support[k].probability;
    }
    law_of_union[boosted] += p;
    int pos = 0;
    while (pos < rounds && ++index[pos] == support.size()) index[pos++] = 0;
    if (pos == rounds) break;
  }
  PolicyEvaluation out;
  out.mode = EvalMode::Exact;
  out.runs = static_cast<long>(outcomes) * static_cast<long>(support.size());
  for (const auto& [boosted, p] : law_of_union) {
    const std::vector<Mask> draws{boosted};
    accumulate(problem, boost_and_sample_from_draws(problem, alg, draws), support, p, out);
  }
  out.expected_cost = out.first_stage_cost + out.recourse_cost;
  return out;
}

PolicyEvaluation exact_ind_boost(const ProblemInstance& problem, const ApproxAlgorithm& alg,
                                 const ScenarioDistribution& dist, const EvaluationOptions& opts) {
  const auto* marginals = dist.marginals();
  if (marginals == nullptr) throw Error(ErrorKind::InvalidArgument, "Ind-Boost needs an independent distribution");
  std::vector<double> boosted_marginals;
  for (double p : *marginals) boosted_marginals.push_back(boosted_probability(p, problem.sigma()));
  const auto boost_law = ScenarioDistribution::independent(boosted_marginals).enumerate_support(opts.support_cap);
  const auto support = dist.enumerate_support(opts.support_cap);
  if (static_cast<double>(boost_law.size()) * static_cast<double>(support.size()) > static_cast<double>(opts.draw_cap))
    throw Error(ErrorKind::CapExceeded, "exact Ind-Boost evaluation is over the draw cap");
  PolicyEvaluation out;
  out.mode = EvalMode::Exact;
  out.runs = static_cast<long>(boost_law.size() * support.size());
  for (const auto& d : boost_law)
    accumulate(problem, ind_boost_from_boosted(problem, alg, d.clients), support, d.probability, out);
  out.expected_cost = out.first_stage_cost + out.recourse_cost;
  return out;
}

}  // namespace

PolicyEvaluation evaluate_policy(const ProblemInstance& problem, const ApproxAlgorithm& alg,
                                 const ScenarioDistribution& dist, Strategy strategy, const EvaluationOptions& opts) {
  if (dist.num_clients() != problem.num_clients())
    throw Error(ErrorKind::InvalidArgument, "distribution and problem disagree on the client set");
  if (opts.mode == EvalMode::Exact)
    return strategy == Strategy::BoostAndSample ? exact_boost_and_sample(problem, alg, dist, opts)
                                                : exact_ind_boost(problem, alg, dist, opts);

  if (opts.runs < 10000) throw Error(ErrorKind::InvalidArgument, "Monte Carlo evaluation needs at least 10^4 runs");
  if (strategy == Strategy::IndBoost && dist.marginals() == nullptr)
    throw Error(ErrorKind::InvalidArgument, "Ind-Boost needs an independent distribution");
  Rng rng = stream(opts.seed, "evaluate_policy");
  double sum = 0.0, sum_sq = 0.0, first = 0.0;
  for (long k = 0; k < opts.runs; ++k) {
    const TwoStagePolicy policy = strategy == Strategy::BoostAndSample
                                      ? boost_and_sample(problem, alg, dist, rng)
                                      : ind_boost(problem, alg, *dist.marginals(), problem.sigma(), rng);
    const double cost = policy.realized_cost(problem, dist.sample(rng));
    sum += cost;
    sum_sq += cost * cost;
    first += policy.first_stage.cost;
  }
  const double n = static_cast<double>(opts.runs);
  PolicyEvaluation out;
  out.mode = EvalMode::MonteCarlo;
  out.runs = opts.runs;
  out.expected_cost = sum / n;
  out.first_stage_cost = first / n;
  out.recourse_cost = out.expected_cost - out.first_stage_cost;
  const double var = std::max(0.0, (sum_sq - n * out.expected_cost * out.expected_cost) / (n - 1.0));
  out.ci_halfwidth = 2.5758293035489004 * std::sqrt(var / n);
  return out;
}

TwoStageOptimum exact_two_stage_opt(const ProblemInstance& problem, const ScenarioDistribution& dist,
                                    const Caps& caps, long work_cap) {
  const auto support = dist.enumerate_support(caps.support_clients);
  const double work = std::ldexp(static_cast<double>(support.size()), problem.num_elements());
  if (work > static_cast<double>(work_cap))
    throw Error(ErrorKind::CapExceeded, "two-stage enumeration needs 2^|X| * support = " + std::to_string(work));
  TwoStageOptimum best;
  bool found = false;
  for (Mask f0 = 0; f0 <= problem.all_elements(); ++f0) {
    double value = problem.cost(f0);
    for (const auto& s : support) {
      if (s.probability == 0.0) continue;
      value += problem.sigma() * s.probability * exact_opt(problem, s.clients, f0, caps).cost;
    }
    if (!found || value < best.value - kCostTolerance ||
        (value <= best.value + kCostTolerance && lex_less(f0, best.first_stage.chosen))) {
      found = true;
      best = {value, problem.make_solution(f0)};
    }
  }
  return best;
}

JointLaw boosted_joint_law(std::span<const WeightedScenario> support, int rounds) {
  JointLaw law;
  const std::size_t n = support.size();
  std::vector<std::size_t> index(rounds + 1, 0);  // last slot is S
  for (;;) {
    Mask boosted = 0;
    double p = 1.0;
    for (int k = 0; k < rounds; ++k) {
      boosted |= support[index[k]].clients;
      p *= support[index[k]].probability;
    }
    p *= support[index[rounds]].probability;
    law[{boosted, support[index[rounds]].clients}] += p;
    std::size_t pos = 0;
    while (pos <= static_cast<std::size_t>(rounds) && ++index[pos] == n) index[pos++] = 0;
    if (pos > static_cast<std::size_t>(rounds)) break;
  }
  return law;
}

JointLaw holdout_joint_law(std::span<const WeightedScenario> support, int rounds) {
  JointLaw law;
  const std::size_t n = support.size();
  const int draws = rounds + 1;
  std::vector<std::size_t> index(draws, 0);
  for (;;) {
    double p = 1.0;
    for (std::size_t k : index) p *= support[k].probability;
    for (int t = 0; t < draws; ++t) {
      Mask rest = 0;
      for (int k = 0; k < draws; ++k)
        if (k != t) rest |= support[index[k]].clients;
      law[{rest, support[index[t]].clients}] += p / draws;
    }
    int pos = 0;
    while (pos < draws && ++index[pos] == n) index[pos++] = 0;
    if (pos == draws) break;
  }
  return law;
}

double max_abs_difference(const JointLaw& a, const JointLaw& b) {
  double worst = 0.0;
  for (const auto& [key, p] : a) {
    auto it = b.find(key);
    worst = std::max(worst, std::abs(p - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [key, p] : b)
    if (!a.contains(key)) worst = std::max(worst, std::abs(p));
  return worst;
}

bool policy_feasible(const ProblemInstance& problem, const TwoStagePolicy& policy,
                     std::span<const WeightedScenario> support) {
  for (const auto& s : support)
    if (!problem.feasible(policy.first_stage.chosen | policy.recourse(s.clients).chosen, s.clients)) return false;
  return true;
}

}  // namespace stochopt
