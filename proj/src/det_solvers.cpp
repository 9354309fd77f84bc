#include "stochopt/det_solvers.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

#include "stochopt/error.hpp"

namespace stochopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Payload>
const Payload& payload_as(const ProblemInstance& problem, const char* solver) {
  const auto* p = std::get_if<Payload>(&problem.payload());
  if (p == nullptr)
    throw Error(ErrorKind::InvalidArgument,
                std::string(solver) + " called on a " + to_string(problem.kind()) + " instance");
  return *p;
}

double effective_cost(const ProblemInstance& problem, Mask base, int e) {
  return contains(base, e) ? 0.0 : problem.costs()[e];
}

Solution finish(const ProblemInstance& problem, Mask chosen, Mask base, Mask clients) {
  chosen &= ~base;
  if (!problem.feasible(base | chosen, clients))
    throw Error(ErrorKind::NumericalFailure, "solver produced an infeasible element set");
  return problem.make_solution(chosen);
}

}  // namespace

Solution steiner_solve(const ProblemInstance& problem, Mask terminals, Mask base) {
  const auto& graph = payload_as<SteinerGraph>(problem, "steiner_solve");
  terminals = graph.terminals(terminals);
  if (cardinality(terminals) <= 1 || problem.feasible(base, terminals)) return {};
  const int n = problem.num_clients();
  const int m = problem.num_elements();

  // All-pairs shortest paths with the cheapest parallel edge per vertex pair;
  // via[u][v] is the first edge on the chosen u→v path.
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, kInf));
  std::vector<std::vector<int>> via(n, std::vector<int>(n, -1));
  for (int v = 0; v < n; ++v) dist[v][v] = 0.0;
  for (int e = 0; e < m; ++e) {
    auto [u, v] = graph.endpoints[e];
    if (u == v) continue;
    const double w = effective_cost(problem, base, e);
    if (w < dist[u][v]) {
      dist[u][v] = dist[v][u] = w;
      via[u][v] = via[v][u] = e;
    }
  }
  std::vector<std::vector<int>> next(n, std::vector<int>(n, -1));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (via[u][v] >= 0) next[u][v] = v;
  for (int k = 0; k < n; ++k)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (dist[u][k] + dist[k][v] < dist[u][v] - kCostTolerance) {
          dist[u][v] = dist[u][k] + dist[k][v];
          next[u][v] = next[u][k];
        }

  const std::vector<int> term = members(terminals);
  for (int t : term)
    if (dist[term.front()][t] == kInf)
      throw Error(ErrorKind::Disconnected, "terminal " + problem.clients()[t] + " is unreachable");

  // Prim over the metric closure restricted to terminals.
  const std::size_t k = term.size();
  std::vector<bool> in_tree(k, false);
  std::vector<double> key(k, kInf);
  std::vector<int> parent(k, -1);
  key[0] = 0.0;
  Mask expanded = 0;
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t pick = k;
    for (std::size_t i = 0; i < k; ++i)
      if (!in_tree[i] && (pick == k || key[i] < key[pick])) pick = i;
    in_tree[pick] = true;
    if (parent[pick] >= 0) {
      for (int u = term[parent[pick]], v = term[pick]; u != v; u = next[u][v]) expanded |= bit(via[u][next[u][v]]);
    }
    for (std::size_t i = 0; i < k; ++i) {
      const double d = dist[term[pick]][term[i]];
      if (!in_tree[i] && d < key[i]) {
        key[i] = d;
        parent[i] = static_cast<int>(pick);
      }
    }
  }

  // Spanning forest of the expanded subgraph, then strip non-terminal leaves.
  std::vector<int> edges = members(expanded);
  std::stable_sort(edges.begin(), edges.end(), [&](int a, int b) {
    return effective_cost(problem, base, a) < effective_cost(problem, base, b);
  });
  std::vector<int> uf(n);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  Mask tree = 0;
  for (int e : edges) {
    auto [u, v] = graph.endpoints[e];
    const int ru = find(u), rv = find(v);
    if (ru == rv) continue;
    uf[ru] = rv;
    tree |= bit(e);
  }
  for (bool pruned = true; pruned;) {
    pruned = false;
    std::vector<int> degree(n, 0);
    for (int e : members(tree)) {
      ++degree[graph.endpoints[e].first];
      ++degree[graph.endpoints[e].second];
    }
    for (int e : members(tree)) {
      auto [u, v] = graph.endpoints[e];
      if ((degree[u] == 1 && !contains(terminals, u)) || (degree[v] == 1 && !contains(terminals, v))) {
        tree &= ~bit(e);
        pruned = true;
      }
    }
  }
  return finish(problem, tree, base, terminals);
}

Solution ufl_solve(const ProblemInstance& problem, Mask clients, Mask base) {
  const auto& fl = payload_as<FacilityLocation>(problem, "ufl_solve");
  Mask unserved = 0;
  for (int j : members(clients))
    if (!problem.feasible(base, bit(j))) unserved |= bit(j);
  if (unserved == 0) return {};

  Mask chosen = 0;
  std::vector<int> facilities = fl.facilities;
  std::sort(facilities.begin(), facilities.end());

  while (unserved != 0) {
    double best_ratio = kInf;
    int best_facility = -1;
    std::vector<int> best_links;
    for (int f : facilities) {
      const double open = contains(base | chosen, f) ? 0.0 : problem.costs()[f];
      // Cheapest link from f to each unserved client, ordered by price then client.
      std::vector<std::tuple<double, int, int>> offers;  // (price, client, link element)
      for (int j : members(unserved)) {
        int link = -1;
        double price = kInf;
        for (const auto& l : fl.links) {
          if (l.facility != f || l.client != j) continue;
          const double p = contains(base | chosen, l.element) ? 0.0 : problem.costs()[l.element];
          if (p < price || (p == price && l.element < link)) {
            price = p;
            link = l.element;
          }
        }
        if (link >= 0) offers.emplace_back(price, j, link);
      }
      std::sort(offers.begin(), offers.end());
      double total = open;
      for (std::size_t k = 0; k < offers.size(); ++k) {
        total += std::get<0>(offers[k]);
        const double ratio = total / static_cast<double>(k + 1);
        if (ratio < best_ratio - kCostTolerance) {
          best_ratio = ratio;
          best_facility = f;
          best_links.clear();
          for (std::size_t i = 0; i <= k; ++i) best_links.push_back(std::get<2>(offers[i]));
        }
      }
    }
    if (best_facility < 0)
      throw Error(ErrorKind::Infeasible, "no facility can reach clients " + format_mask(unserved, problem.clients()));
    chosen |= bit(best_facility);
    for (int link : best_links) {
      chosen |= bit(link);
      for (const auto& l : fl.links)
        if (l.element == link) unserved &= ~bit(l.client);
    }
  }
  return finish(problem, chosen, base, clients);
}

Solution set_cover_solve(const ProblemInstance& problem, Mask clients, Mask base) {
  const auto& sets = payload_as<SetSystem>(problem, "set_cover_solve");
  Mask uncovered = clients;
  for (int e : members(base)) uncovered &= ~sets.covers[e];
  Mask chosen = 0;
  while (uncovered != 0) {
    int best = -1;
    double best_ratio = kInf;
    for (int e = 0; e < problem.num_elements(); ++e) {
      if (contains(base | chosen, e)) continue;
      const int gain = cardinality(sets.covers[e] & uncovered);
      if (gain == 0) continue;
      const double ratio = problem.costs()[e] / gain;
      if (ratio < best_ratio - kCostTolerance) {
        best_ratio = ratio;
        best = e;
      }
    }
    if (best < 0) throw Error(ErrorKind::Infeasible, "clients " + format_mask(uncovered, problem.clients()) + " are uncoverable");
    chosen |= bit(best);
    uncovered &= ~sets.covers[best];
  }
  return finish(problem, chosen, base, clients);
}

Solution vertex_cover_solve(const ProblemInstance& problem, Mask clients, Mask base) {
  const auto& graph = payload_as<VertexCoverGraph>(problem, "vertex_cover_solve");
  std::vector<double> residual(problem.num_elements());
  for (int v = 0; v < problem.num_elements(); ++v) residual[v] = effective_cost(problem, base, v);
  Mask cover = base;
  for (int j : members(clients)) {
    auto [u, v] = graph.endpoints[j];
    if (contains(cover, u) || contains(cover, v)) continue;
    const double delta = std::min(residual[u], residual[v]);
    residual[u] -= delta;
    residual[v] -= delta;
    if (residual[u] <= kCostTolerance) cover |= bit(u);
    if (residual[v] <= kCostTolerance) cover |= bit(v);
  }
  // Reverse delete: drop purchased vertices the other picks already cover.
  const std::vector<int> picked = members(cover & ~base);
  for (auto it = picked.rbegin(); it != picked.rend(); ++it)
    if (problem.feasible(cover & ~bit(*it), clients)) cover &= ~bit(*it);
  return finish(problem, cover, base, clients);
}

double harmonic(int n) {
  double h = 0.0;
  for (int k = 1; k <= n; ++k) h += 1.0 / k;
  return h;
}

ApproxAlgorithm default_algorithm(const ProblemInstance& problem) {
  switch (problem.kind()) {
    case ProblemKind::Steiner: return {"steiner-mst", 2.0, steiner_solve};
    case ProblemKind::FacilityLocation: return {"ufl-greedy", 3.0, ufl_solve};
    case ProblemKind::SetCover:
      return {"set-cover-greedy", std::max(1.0, harmonic(problem.num_clients())), set_cover_solve};
    case ProblemKind::VertexCover: return {"vertex-cover-pricing", 2.0, vertex_cover_solve};
    case ProblemKind::Custom: return exact_algorithm();
  }
  throw Error(ErrorKind::InvalidArgument, "unknown problem kind");
}

ApproxAlgorithm exact_algorithm(const Caps& caps) {
  return {"exact", 1.0, [caps](const ProblemInstance& p, Mask s, Mask base) { return exact_opt(p, s, base, caps); }};
}

double empirical_alpha(const ApproxAlgorithm& alg, const ProblemInstance& problem, const Caps& caps) {
  double worst = 1.0;
  for (Mask s = 0; s <= problem.all_clients(); ++s) {
    const double opt = exact_opt(problem, s, 0, caps).cost;
    const double got = alg.solve(problem, s).cost;
    if (got <= kCostTolerance) continue;
    if (opt <= kCostTolerance) return kInf;
    worst = std::max(worst, got / opt);
  }
  return worst;
}

}  // namespace stochopt
