#pragma once

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stochopt/subset.hpp"

namespace stochopt {

enum class ProblemKind { Steiner, FacilityLocation, SetCover, VertexCover, Custom };

const char* to_string(ProblemKind kind);

/// Clients are graph vertices, elements are edges. With a root, every
/// nonempty client set must be connected to it; without one, only the
/// clients themselves must be mutually connected.
struct SteinerGraph {
  std::vector<std::pair<int, int>> endpoints;  // per element: client indices
  int root = -1;

  Mask terminals(Mask clients) const { return (clients != 0 && root >= 0) ? clients | bit(root) : clients; }
};

/// Elements are either facilities or (facility, client) assignment links; a
/// client is served once some link to it and that link's facility are both
/// bought. Link costs carry the service distances, so c(F) stays additive.
struct FacilityLocation {
  struct Link {
    int element;
    int facility;  // element index of the facility
    int client;
  };
  std::vector<int> facilities;
  std::vector<Link> links;
};

/// Elements are sets of clients; each entry is the client mask the set covers.
struct SetSystem {
  std::vector<Mask> covers;
};

/// Clients are graph edges, elements are vertices.
struct VertexCoverGraph {
  std::vector<std::pair<int, int>> endpoints;  // per client: element indices
};

/// Arbitrary feasibility predicate (element subset, client subset) -> bool.
/// Used for hand-built fixtures and adversarial checker tests.
struct CustomOracle {
  std::function<bool(Mask, Mask)> feasible;
};

using ProblemPayload = std::variant<SteinerGraph, FacilityLocation, SetSystem, VertexCoverGraph, CustomOracle>;

struct Solution {
  Mask chosen = 0;
  double cost = 0.0;
};

/// A client-element problem: ground sets, additive first-stage prices, the
/// second-stage inflation factor and the feasibility relation Sols(S).
/// Immutable once built; construction validates every invariant.
class ProblemInstance {
 public:
  ProblemInstance(std::vector<std::string> clients, std::vector<std::string> elements,
                  std::vector<double> costs, double sigma, ProblemPayload payload);

  int num_clients() const { return static_cast<int>(clients_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  const std::vector<std::string>& clients() const { return clients_; }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::vector<double>& costs() const { return costs_; }
  double sigma() const { return sigma_; }
  Mask all_clients() const { return full_mask(num_clients()); }
  Mask all_elements() const { return full_mask(num_elements()); }

  ProblemKind kind() const;
  const ProblemPayload& payload() const { return payload_; }

  double cost(Mask elements) const;
  Solution make_solution(Mask elements) const { return {elements, cost(elements)}; }

  /// F ∈ Sols(S).
  bool feasible(Mask elements, Mask clients) const;

  ProblemInstance with_sigma(double sigma) const;
  ProblemInstance with_costs(std::vector<double> costs) const;

 private:
  bool steiner_connected(const SteinerGraph& g, Mask elements, Mask clients) const;

  std::vector<std::string> clients_;
  std::vector<std::string> elements_;
  std::vector<double> costs_;
  double sigma_;
  ProblemPayload payload_;
  // For every kind except Steiner and Custom, client j is served iff some
  // witness mask in witnesses_[j] is contained in F.
  std::vector<std::vector<Mask>> witnesses_;
};

}  // namespace stochopt
