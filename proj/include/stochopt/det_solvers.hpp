#pragma once

#include <functional>
#include <string>

#include "stochopt/oracles.hpp"
#include "stochopt/problem.hpp"

namespace stochopt {

/// Each solver returns only the elements it adds on top of `base`, priced at
/// their first-stage cost. Base elements are treated as already paid for,
/// which is how augmentation is realised for every problem kind.
Solution steiner_solve(const ProblemInstance& problem, Mask terminals, Mask base = 0);
Solution ufl_solve(const ProblemInstance& problem, Mask clients, Mask base = 0);
Solution set_cover_solve(const ProblemInstance& problem, Mask clients, Mask base = 0);
Solution vertex_cover_solve(const ProblemInstance& problem, Mask clients, Mask base = 0);

/// An approximation algorithm together with its augmentation routine.
struct ApproxAlgorithm {
  std::string name;
  double alpha = 1.0;  // claimed factor
  std::function<Solution(const ProblemInstance&, Mask clients, Mask base)> run;

  Solution solve(const ProblemInstance& problem, Mask clients) const { return run(problem, clients, 0); }

  /// Elements to add to `base` so the union serves `target`.
  Solution augment(const ProblemInstance& problem, Mask base, Mask target) const {
    return run(problem, target, base);
  }
};

/// Metric-closure MST for Steiner (2), greedy price-per-client for UFL (3,
/// checked empirically), greedy cost-effectiveness for set cover (H_n),
/// edge pricing for vertex cover (2). Custom oracles fall back to the exact
/// search (1).
ApproxAlgorithm default_algorithm(const ProblemInstance& problem);
ApproxAlgorithm exact_algorithm(const Caps& caps = {});

/// max over S ⊆ V of c(alg(S)) / c(OPT(S)); zero-cost pairs are skipped and a
/// positive cost against a zero optimum gives +inf.
double empirical_alpha(const ApproxAlgorithm& alg, const ProblemInstance& problem, const Caps& caps = {});

double harmonic(int n);

}  // namespace stochopt
