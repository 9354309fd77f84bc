#include "stochopt/problem.hpp"

#include <cmath>
#include <numeric>

#include "stochopt/error.hpp"

namespace stochopt {

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Steiner: return "steiner";
    case ProblemKind::FacilityLocation: return "ufl";
    case ProblemKind::SetCover: return "set_cover";
    case ProblemKind::VertexCover: return "vertex_cover";
    case ProblemKind::Custom: return "custom";
  }
  return "unknown";
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

ProblemInstance::ProblemInstance(std::vector<std::string> clients, std::vector<std::string> elements,
                                 std::vector<double> costs, double sigma, ProblemPayload payload)
    : clients_(std::move(clients)),
      elements_(std::move(elements)),
      costs_(std::move(costs)),
      sigma_(sigma),
      payload_(std::move(payload)) {
  const int n = num_clients();
  const int m = num_elements();
  require(n <= kMaxGround && m <= kMaxGround, "ground sets are limited to 62 items");
  require(static_cast<int>(costs_.size()) == m, "one cost per element is required");
  for (double c : costs_) require(std::isfinite(c) && c >= 0.0, "element costs must be finite and nonnegative");
  require(std::isfinite(sigma_) && sigma_ >= 1.0, "inflation factor must be at least 1");

  auto element_ok = [m](int e) { return e >= 0 && e < m; };
  auto client_ok = [n](int j) { return j >= 0 && j < n; };

  std::visit(
      overloaded{
          [&](const SteinerGraph& g) {
            require(static_cast<int>(g.endpoints.size()) == m, "steiner: one endpoint pair per edge element");
            for (auto [u, v] : g.endpoints) require(client_ok(u) && client_ok(v), "steiner: endpoint out of range");
            require(g.root == -1 || client_ok(g.root), "steiner: root out of range");
          },
          [&](const FacilityLocation& f) {
            witnesses_.assign(n, {});
            for (int fac : f.facilities) require(element_ok(fac), "ufl: facility out of range");
            for (const auto& link : f.links) {
              require(element_ok(link.element) && element_ok(link.facility) && client_ok(link.client),
                      "ufl: link out of range");
              witnesses_[link.client].push_back(bit(link.element) | bit(link.facility));
            }
          },
          [&](const SetSystem& s) {
            require(static_cast<int>(s.covers.size()) == m, "set_cover: one member list per set element");
            witnesses_.assign(n, {});
            for (int e = 0; e < m; ++e) {
              const Mask cover = s.covers[e];
              require(is_subset(cover, full_mask(n)), "set_cover: member out of range");
              for (int j : members(cover)) witnesses_[j].push_back(bit(e));
            }
          },
          [&](const VertexCoverGraph& g) {
            require(static_cast<int>(g.endpoints.size()) == n, "vertex_cover: one endpoint pair per edge client");
            witnesses_.assign(n, {});
            for (int j = 0; j < n; ++j) {
              auto [u, v] = g.endpoints[j];
              require(element_ok(u) && element_ok(v), "vertex_cover: endpoint out of range");
              witnesses_[j] = {bit(u), bit(v)};
            }
          },
          [&](const CustomOracle& c) { require(static_cast<bool>(c.feasible), "custom: feasibility oracle missing"); },
      },
      payload_);
}

ProblemKind ProblemInstance::kind() const {
  return std::visit(overloaded{
                        [](const SteinerGraph&) { return ProblemKind::Steiner; },
                        [](const FacilityLocation&) { return ProblemKind::FacilityLocation; },
                        [](const SetSystem&) { return ProblemKind::SetCover; },
                        [](const VertexCoverGraph&) { return ProblemKind::VertexCover; },
                        [](const CustomOracle&) { return ProblemKind::Custom; },
                    },
                    payload_);
}

double ProblemInstance::cost(Mask elements) const {
  double total = 0.0;
  while (elements != 0) {
    total += costs_[std::countr_zero(elements)];
    elements &= elements - 1;
  }
  return total;
}

bool ProblemInstance::feasible(Mask elements, Mask clients) const {
  if (const auto* g = std::get_if<SteinerGraph>(&payload_)) return steiner_connected(*g, elements, clients);
  if (const auto* c = std::get_if<CustomOracle>(&payload_)) return c->feasible(elements, clients);
  for (Mask rest = clients; rest != 0; rest &= rest - 1) {
    const auto& options = witnesses_[std::countr_zero(rest)];
    bool served = false;
    for (Mask w : options) {
      if (is_subset(w, elements)) {
        served = true;
        break;
      }
    }
    if (!served) return false;
  }
  return true;
}

bool ProblemInstance::steiner_connected(const SteinerGraph& g, Mask elements, Mask clients) const {
  clients = g.terminals(clients);
  if (cardinality(clients) <= 1) return true;
  std::vector<int> parent(num_clients());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (Mask rest = elements; rest != 0; rest &= rest - 1) {
    auto [u, v] = g.endpoints[std::countr_zero(rest)];
    parent[find(u)] = find(v);
  }
  const int root = find(std::countr_zero(clients));
  for (Mask rest = clients; rest != 0; rest &= rest - 1) {
    if (find(std::countr_zero(rest)) != root) return false;
  }
  return true;
}

ProblemInstance ProblemInstance::with_sigma(double sigma) const {
  return ProblemInstance(clients_, elements_, costs_, sigma, payload_);
}

ProblemInstance ProblemInstance::with_costs(std::vector<double> costs) const {
  return ProblemInstance(clients_, elements_, std::move(costs), sigma_, payload_);
}

}  // namespace stochopt
