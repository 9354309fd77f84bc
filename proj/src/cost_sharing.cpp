#include "stochopt/cost_sharing.hpp"

#include <memory>
#include <vector>

#include "stochopt/error.hpp"

namespace stochopt {

namespace {

void require_pair_caps(const ProblemInstance& problem, const Caps& caps) {
  if (problem.num_clients() > caps.pair_clients || problem.num_elements() > caps.pair_elements)
    throw Error(ErrorKind::CapExceeded, "cost-share checks need |V| <= " + std::to_string(caps.pair_clients) +
                                            " and |X| <= " + std::to_string(caps.pair_elements));
}

void record(StrictnessReport& report, double augment, double share, Mask s, Mask t) {
  ++report.pairs_examined;
  if (augment <= kCostTolerance) return;
  const double ratio = share <= 0.0 ? std::numeric_limits<double>::infinity() : augment / share;
  if (ratio > report.beta_hat) {
    report.beta_hat = ratio;
    report.worst_base = s;
    report.worst_added = t;
    report.worst_augment_cost = augment;
  }
}

template <class PairFilter>
StrictnessReport measure(const CostShareFunction& xi, const ApproxAlgorithm& alg, const ProblemInstance& problem,
                         const Caps& caps, PairFilter&& use_pair) {
  require_pair_caps(problem, caps);
  std::vector<Mask> first_stage;
  for (Mask s = 0; s <= problem.all_clients(); ++s) first_stage.push_back(alg.solve(problem, s).chosen);
  StrictnessReport report;
  for (Mask s = 0; s <= problem.all_clients(); ++s) {
    for (Mask t = 1; t <= problem.all_clients(); ++t) {
      if (!use_pair(t)) continue;
      const Mask target = s | t;
      const double augment = alg.augment(problem, first_stage[s], target).cost;
      record(report, augment, share_of(xi, target, t), s, t);
    }
  }
  return report;
}

}  // namespace

double share_of(const CostShareFunction& xi, Mask served, Mask group) {
  double total = 0.0;
  for (int j : members(group)) total += xi(served, j);
  return total;
}

CostShareFunction equal_split_shares(const ProblemInstance& problem, const Caps& caps) {
  auto table = std::make_shared<const std::vector<Solution>>(opt_table(problem, caps));
  return [table](Mask s, int j) {
    if (!contains(s, j)) return 0.0;
    return (*table)[s].cost / cardinality(s);
  };
}

CheckReport check_share_support(const CostShareFunction& xi, const ProblemInstance& problem, const Caps& caps) {
  require_pair_caps(problem, caps);
  for (Mask s = 0; s <= problem.all_clients(); ++s)
    for (int j = 0; j < problem.num_clients(); ++j) {
      const double v = xi(s, j);
      if (v < 0.0) return {false, "negative share for " + problem.clients()[j]};
      if (v > 0.0 && !contains(s, j))
        return {false, "client " + problem.clients()[j] + " charged outside " + format_mask(s, problem.clients())};
    }
  return {};
}

CheckReport check_fairness(const CostShareFunction& xi, const ProblemInstance& problem, const Caps& caps) {
  require_pair_caps(problem, caps);
  for (Mask s = 0; s <= problem.all_clients(); ++s) {
    const double opt = exact_opt(problem, s, 0, caps).cost;
    const double shares = share_of(xi, s, s);
    if (shares > opt + kCostTolerance)
      return {false, "shares of " + format_mask(s, problem.clients()) + " total " + std::to_string(shares) +
                         " but c(OPT) is " + std::to_string(opt)};
  }
  return {};
}

StrictnessReport measure_strictness(const CostShareFunction& xi, const ApproxAlgorithm& alg,
                                    const ProblemInstance& problem, const Caps& caps) {
  return measure(xi, alg, problem, caps, [](Mask) { return true; });
}

StrictnessReport measure_unistrictness(const CostShareFunction& xi, const ApproxAlgorithm& alg,
                                       const ProblemInstance& problem, const Caps& caps) {
  return measure(xi, alg, problem, caps, [](Mask t) { return cardinality(t) == 1; });
}

}  // namespace stochopt
