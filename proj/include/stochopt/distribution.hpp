#pragma once

#include <variant>
#include <vector>

#include "stochopt/random.hpp"
#include "stochopt/subset.hpp"

namespace stochopt {

struct WeightedScenario {
  Mask clients = 0;
  double probability = 0.0;
};

inline constexpr int kDefaultSupportCap = 20;
inline constexpr double kProbabilityTolerance = 1e-12;

/// Black-box law over client subsets. Three concrete shapes are supported;
/// all of them can be sampled, and all can be enumerated within caps.
class ScenarioDistribution {
 public:
  struct Explicit {
    std::vector<WeightedScenario> scenarios;
  };
  struct IndependentBernoulli {
    std::vector<double> marginals;  // indexed by client
  };
  struct KPartition {
    std::vector<Mask> blocks;
  };
  using Variant = std::variant<Explicit, IndependentBernoulli, KPartition>;

  static ScenarioDistribution explicit_support(int num_clients, std::vector<WeightedScenario> scenarios);
  static ScenarioDistribution independent(std::vector<double> marginals);
  static ScenarioDistribution k_partition(int num_clients, std::vector<Mask> blocks);
  static ScenarioDistribution point_mass(int num_clients, Mask clients) {
    return explicit_support(num_clients, {{clients, 1.0}});
  }

  int num_clients() const { return num_clients_; }
  const Variant& variant() const { return variant_; }
  bool is_independent() const { return std::holds_alternative<IndependentBernoulli>(variant_); }
  const std::vector<double>* marginals() const;

  Mask sample(Rng& rng) const;

  /// Full support with probabilities, in a fixed order. Zero-probability
  /// product outcomes are omitted. Throws CapExceeded when an independent
  /// law over more than `cap` clients is requested.
  std::vector<WeightedScenario> enumerate_support(int cap = kDefaultSupportCap) const;

  /// P(j ∈ S) for every client.
  std::vector<double> client_marginals() const;

 private:
  ScenarioDistribution(int num_clients, Variant v) : num_clients_(num_clients), variant_(std::move(v)) {}

  int num_clients_;
  Variant variant_;
  std::vector<double> cumulative_;  // Explicit only
};

}  // namespace stochopt
