#include "stochopt/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochopt/error.hpp"

namespace stochopt {

ScenarioDistribution ScenarioDistribution::explicit_support(int num_clients, std::vector<WeightedScenario> scenarios) {
  if (num_clients < 0 || num_clients > kMaxGround) throw Error(ErrorKind::InvalidArgument, "client count out of range");
  if (scenarios.empty()) throw Error(ErrorKind::InvalidArgument, "explicit distribution needs at least one scenario");
  double total = 0.0;
  std::vector<double> cumulative;
  cumulative.reserve(scenarios.size());
  for (const auto& s : scenarios) {
    if (!(s.probability >= 0.0) || !std::isfinite(s.probability))
      throw Error(ErrorKind::InvalidArgument, "scenario probabilities must be nonnegative");
    if (!is_subset(s.clients, full_mask(num_clients)))
      throw Error(ErrorKind::InvalidArgument, "scenario mentions an unknown client");
    total += s.probability;
    cumulative.push_back(total);
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance)
    throw Error(ErrorKind::InvalidArgument, "scenario probabilities sum to " + std::to_string(total));
  ScenarioDistribution d(num_clients, Explicit{std::move(scenarios)});
  d.cumulative_ = std::move(cumulative);
  return d;
}

ScenarioDistribution ScenarioDistribution::independent(std::vector<double> marginals) {
  if (static_cast<int>(marginals.size()) > kMaxGround) throw Error(ErrorKind::InvalidArgument, "too many clients");
  for (double p : marginals)
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "marginals must lie in [0,1]");
  const int n = static_cast<int>(marginals.size());
  return ScenarioDistribution(n, IndependentBernoulli{std::move(marginals)});
}

ScenarioDistribution ScenarioDistribution::k_partition(int num_clients, std::vector<Mask> blocks) {
  if (num_clients < 0 || num_clients > kMaxGround) throw Error(ErrorKind::InvalidArgument, "client count out of range");
  if (blocks.empty()) throw Error(ErrorKind::InvalidArgument, "k-partition needs at least one block");
  Mask seen = 0;
  for (Mask b : blocks) {
    if ((seen & b) != 0) throw Error(ErrorKind::InvalidArgument, "k-partition blocks must be disjoint");
    if (!is_subset(b, full_mask(num_clients))) throw Error(ErrorKind::InvalidArgument, "block mentions an unknown client");
    seen |= b;
  }
  return ScenarioDistribution(num_clients, KPartition{std::move(blocks)});
}

const std::vector<double>* ScenarioDistribution::marginals() const {
  if (const auto* ind = std::get_if<IndependentBernoulli>(&variant_)) return &ind->marginals;
  return nullptr;
}

Mask ScenarioDistribution::sample(Rng& rng) const {
  if (const auto* ex = std::get_if<Explicit>(&variant_)) {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return ex->scenarios[static_cast<std::size_t>(it - cumulative_.begin())].clients;
  }
  if (const auto* ind = std::get_if<IndependentBernoulli>(&variant_)) {
    Mask s = 0;
    for (int j = 0; j < num_clients_; ++j)
      if (rng.bernoulli(ind->marginals[j])) s |= bit(j);
    return s;
  }
  const auto& kp = std::get<KPartition>(variant_);
  return kp.blocks[rng.below(static_cast<int>(kp.blocks.size()))];
}

std::vector<WeightedScenario> ScenarioDistribution::enumerate_support(int cap) const {
  if (const auto* ex = std::get_if<Explicit>(&variant_)) return ex->scenarios;
  if (const auto* kp = std::get_if<KPartition>(&variant_)) {
    std::vector<WeightedScenario> out;
    const double w = 1.0 / static_cast<double>(kp->blocks.size());
    for (Mask b : kp->blocks) out.push_back({b, w});
    return out;
  }
  const auto& p = std::get<IndependentBernoulli>(variant_).marginals;
  if (num_clients_ > cap)
    throw Error(ErrorKind::CapExceeded, "independent support over " + std::to_string(num_clients_) +
                                            " clients exceeds enumeration cap " + std::to_string(cap));
  std::vector<WeightedScenario> out;
  const Mask total = full_mask(num_clients_);
  for (Mask s = 0;; ++s) {
    double prob = 1.0;
    for (int j = 0; j < num_clients_ && prob > 0.0; ++j) prob *= contains(s, j) ? p[j] : 1.0 - p[j];
    if (prob > 0.0) out.push_back({s, prob});
    if (s == total) break;
  }
  return out;
}

std::vector<double> ScenarioDistribution::client_marginals() const {
  if (const auto* ind = std::get_if<IndependentBernoulli>(&variant_)) return ind->marginals;
  std::vector<double> out(num_clients_, 0.0);
  for (const auto& s : enumerate_support())
    for (int j : members(s.clients)) out[j] += s.probability;
  return out;
}

}  // namespace stochopt
