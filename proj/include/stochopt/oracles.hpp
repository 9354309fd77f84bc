#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stochopt/problem.hpp"

namespace stochopt {

/// Enumeration limits for the brute-force oracles. Each keeps the oracle in
/// the seconds range on a desktop.
struct Caps {
  int exact_elements = 24;      // exact_opt searches 2^|X|
  int support_clients = 20;     // independent support enumeration
  int pair_clients = 5;  // pairwise S,T checks
  int pair_elements = 12;

  /// Defaults overridden by STOCHOPT_CAP_EXACT_ELEMENTS, STOCHOPT_CAP_SUPPORT,
  /// STOCHOPT_CAP_PAIR_CLIENTS and STOCHOPT_CAP_PAIR_ELEMENTS when set.
  static Caps from_env();
};

inline constexpr double kCostTolerance = 1e-9;

/// Cheapest F ⊆ X \ base with base ∪ F ∈ Sols(S), by exhaustive search.
/// Cost ties go to the lexicographically smallest F. Throws Infeasible when
/// no such F exists and CapExceeded when |X \ base| is above the cap.
Solution exact_opt(const ProblemInstance& problem, Mask clients, Mask base = 0, const Caps& caps = {});

/// OPT(S) for every S ⊆ V with an empty base, indexed by client mask.
std::vector<Solution> opt_table(const ProblemInstance& problem, const Caps& caps = {});

struct CheckReport {
  bool passed = true;
  std::string violation;  // empty when passed
};

/// Pairwise subadditivity over all S, T ⊆ V: OPT(S) ∪ OPT(T) serves S ∪ T and
/// c(OPT(S ∪ T)) ≤ c(OPT(S)) + c(OPT(T)).
CheckReport check_subadditive(const ProblemInstance& problem, const Caps& caps = {});

/// Monotonicity of Sols(S) under adding elements, and ∅ ∈ Sols(∅).
CheckReport check_feasibility_monotone(const ProblemInstance& problem, const Caps& caps = {});

}  // namespace stochopt
