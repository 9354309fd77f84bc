#pragma once

#include <functional>
#include <limits>
#include <string>

#include "stochopt/det_solvers.hpp"
#include "stochopt/oracles.hpp"

namespace stochopt {

/// ξ(S, j): the share charged to client j when the served set is S.
using CostShareFunction = std::function<double(Mask, int)>;

/// ξ(S, T) = Σ_{j ∈ T} ξ(S, j).
double share_of(const CostShareFunction& xi, Mask served, Mask group);

/// Splits c(OPT(S)) equally among the members of S. Exact optimum values are
/// tabulated once, so the instance must sit inside the exact_opt caps.
CostShareFunction equal_split_shares(const ProblemInstance& problem, const Caps& caps = {});

/// ξ(S, j) > 0 only for j ∈ S, over every S and j.
CheckReport check_share_support(const CostShareFunction& xi, const ProblemInstance& problem, const Caps& caps = {});

/// ξ(S, S) ≤ c(OPT(S)) for every S ⊆ V.
CheckReport check_fairness(const CostShareFunction& xi, const ProblemInstance& problem, const Caps& caps = {});

struct StrictnessReport {
  double beta_hat = 0.0;  // +inf when a zero-share pair needs positive augmentation
  Mask worst_base = 0;    // S of the maximising pair
  Mask worst_added = 0;   // T of the maximising pair
  double worst_augment_cost = 0.0;
  long pairs_examined = 0;

  bool finite() const { return beta_hat < std::numeric_limits<double>::infinity(); }
};

/// Largest ratio (cost of augmenting alg(S) to serve S ∪ T) / ξ(S ∪ T, T)
/// over all S, T ⊆ V. Pairs with zero share and zero augmentation are
/// skipped.
StrictnessReport measure_strictness(const CostShareFunction& xi, const ApproxAlgorithm& alg,
                                    const ProblemInstance& problem, const Caps& caps = {});

/// Same ratio restricted to single-client additions T = {j}.
StrictnessReport measure_unistrictness(const CostShareFunction& xi, const ApproxAlgorithm& alg,
                                       const ProblemInstance& problem, const Caps& caps = {});

}  // namespace stochopt
