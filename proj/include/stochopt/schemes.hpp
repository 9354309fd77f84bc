#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "stochopt/set_function.hpp"

namespace stochopt {

/// χ(i, S, σ_S): share of item i when S is served in the order σ_S. `order`
/// lists the members of S, first to last.
using OrderedShare = std::function<double(int item, Mask served, std::span<const int> order)>;

struct OrderedCostShareScheme {
  OrderedShare chi;
  double eta = 1.0;   // claimed summability factor
  double beta = 1.0;  // claimed budget-balance factor
};

/// χ(i, S, σ) = f(items up to and including i) - f(items before i).
/// Rejects f that is not nondecreasing or not submodular (exhaustive on
/// ground sets of at most 10 items).
OrderedCostShareScheme marginal_scheme(const SetFunction& f);

struct SchemeCheckOptions {
  int exhaustive_limit = 5;     // all orderings of S with |S| ≤ this
  int sampled_orderings = 256;  // per larger S
  int max_ground = 6;
  std::uint64_t seed = 0x5eedULL;
  /// When set, cross-monotonicity is checked only on partial-prefix pairs of
  /// this partition {A_1..A_K}, under orderings that list A_K first and A_1
  /// last. Otherwise every nested pair S ⊆ T with σ_S = σ_T|S is checked.
  const std::vector<Mask>* partial_prefix_blocks = nullptr;
  double tolerance = 1e-9;
};

struct SchemeCheck {
  double eta_hat = 0.0;   // max prefix-sum / f(S)
  double beta_hat = 0.0;  // max f(S) / Σ_{i∈S} χ(i,S,σ_S)
  bool cross_monotone = true;
  bool within_budget = true;  // Σ_{i∈S} χ(i,S,σ_S) ≤ f(S)
  long orderings_checked = 0;
  std::string witness;  // first cross-monotonicity or budget violation

  bool certifies(double eta, double beta, double tol = 1e-9) const {
    return cross_monotone && within_budget && eta_hat <= eta + tol && beta_hat <= beta + tol;
  }
  bool beta_infinite() const { return beta_hat == std::numeric_limits<double>::infinity(); }
};

SchemeCheck check_scheme(const OrderedCostShareScheme& scheme, const SetFunction& f,
                         const SchemeCheckOptions& opts = {});

}  // namespace stochopt
