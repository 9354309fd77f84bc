#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochopt/schemes.hpp"
#include "stochopt/set_function.hpp"

namespace stochopt {

inline constexpr int kMaxWorstCaseGround = 12;

/// (V, f, {p_i}) with f tabulated on 2^V.
struct GapInstance {
  SetFunction f;
  std::vector<double> marginals;
  std::vector<std::string> names;  // optional item labels

  GapInstance(SetFunction f, std::vector<double> marginals, std::vector<std::string> names = {});
  int size() const { return f.ground_size(); }
};

struct WorstCase {
  double value = 0.0;
  std::vector<double> alpha;  // indexed by mask
};

/// max E_D[f] over all distributions D on 2^V with the given marginals.
WorstCase worst_case_expectation(const GapInstance& inst, int cap = kMaxWorstCaseGround);

struct Expectation {
  double value = 0.0;
  double ci_halfwidth = 0.0;  // 99% half-width, 0 when exact
  bool exact = true;
  long runs = 0;
};

struct IndependentOptions {
  bool monte_carlo = false;
  long runs = 100'000;
  std::uint64_t seed = 0;
};

/// E_{D^I}[f] under independent Bernoulli(p_i) membership.
Expectation independent_expectation(const GapInstance& inst, const IndependentOptions& opts = {});

double gap_bound(double eta, double beta);

struct GapReport {
  double worst_case = 0.0;
  double independent = 0.0;
  double kappa = 0.0;
  std::vector<double> worst_distribution;
  Expectation independent_detail;
};

/// κ = L / I. Throws DegenerateInstance when I = 0.
GapReport correlation_gap(const GapInstance& inst, const IndependentOptions& opts = {});

/// Item i of V becomes copies[i] items of V'; copies of one item are
/// consecutive, original order preserved.
class SplitMap {
 public:
  explicit SplitMap(std::vector<int> copies);

  int original_size() const { return static_cast<int>(copies_.size()); }
  int split_size() const { return static_cast<int>(projection_.size()); }
  int copies(int item) const { return copies_[item]; }
  int original(int copy) const { return projection_[copy]; }
  int first_copy(int item) const { return first_[item]; }
  Mask copies_mask(int item) const;
  /// Π(S'): the originals having at least one copy in S'.
  Mask project(Mask split_set) const;

 private:
  std::vector<int> copies_;
  std::vector<int> projection_;
  std::vector<int> first_;
};

/// V' of all copies, p'_copy = p_i / n_i, f'(S') = f(Π(S')).
GapInstance split(const GapInstance& inst, const SplitMap& map);

/// χ'(c, S', σ') = χ(Π(c), Π(S'), induced order) if c is the first copy of
/// its original in σ', else 0. The induced order lists originals by the
/// position of their first copy.
OrderedCostShareScheme split_scheme(const OrderedCostShareScheme& scheme, const SplitMap& map);

/// Moves a worst-case table of the original instance onto the split one:
/// sets with at most one copy of every original get α_{Π(S')} divided by
/// n_i for each original i represented by a single copy; all others get 0.
std::vector<double> split_distribution(const std::vector<double>& alpha, const SplitMap& map);

struct SplitInvariants {
  bool split_monotone = false;
  double worst_case = 0.0;
  double worst_case_split = 0.0;
  double independent = 0.0;
  double independent_split = 0.0;
  std::string violation;

  bool passed() const { return violation.empty(); }
};

SplitInvariants check_split_invariants(const GapInstance& inst, const SplitMap& map);

/// κ ≤ ηβ·e/(e-1) + 1e-6, provided `certificate` certifies (η, β) for f.
/// Throws UncertifiedScheme otherwise.
bool verify_gap_bound(const GapInstance& inst, double eta, double beta, const SchemeCheck& certificate);

/// Returns the blocks when the support of α consists of pairwise disjoint
/// sets, each of probability 1/K, covering V.
std::optional<std::vector<Mask>> k_partition_support(const std::vector<double>& alpha, int n, double tol = 1e-8);

/// (1/K) Σ_k f(A_k).
double k_partition_value(const SetFunction& f, const std::vector<Mask>& blocks);

}  // namespace stochopt
