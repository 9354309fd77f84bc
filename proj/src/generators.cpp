#include "stochopt/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "stochopt/error.hpp"

namespace stochopt {

namespace {

std::vector<std::string> labels(const char* prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

ProblemInstance random_steiner(int clients, int edges, double sigma, Rng& rng) {
  if (clients < 1 || edges < clients - 1) throw Error(ErrorKind::InvalidArgument, "steiner generator needs edges >= clients - 1");
  const int max_edges = clients * (clients - 1) / 2;
  edges = std::min(edges, max_edges);
  std::set<std::pair<int, int>> used;
  SteinerGraph g;
  g.root = 0;
  for (int v = 1; v < clients; ++v) {
    const int u = rng.below(v);
    used.insert({u, v});
    g.endpoints.push_back({u, v});
  }
  while (static_cast<int>(g.endpoints.size()) < edges) {
    int u = rng.below(clients), v = rng.below(clients);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (!used.insert({u, v}).second) continue;
    g.endpoints.push_back({u, v});
  }
  std::vector<double> costs;
  std::vector<std::string> names;
  for (auto [u, v] : g.endpoints) {
    costs.push_back(static_cast<double>(1 + rng.below(5)));
    names.push_back("v" + std::to_string(u + 1) + "-v" + std::to_string(v + 1));
  }
  return ProblemInstance(labels("v", clients), std::move(names), std::move(costs), sigma, std::move(g));
}

ProblemInstance random_ufl(int facilities, int clients, double sigma, Rng& rng) {
  if (facilities < 1 || clients < 0) throw Error(ErrorKind::InvalidArgument, "ufl generator needs a facility");
  std::vector<std::pair<double, double>> fpos, cpos;
  for (int i = 0; i < facilities; ++i) fpos.push_back({rng.uniform(), rng.uniform()});
  for (int j = 0; j < clients; ++j) cpos.push_back({rng.uniform(), rng.uniform()});
  FacilityLocation fl;
  std::vector<double> costs;
  std::vector<std::string> names;
  for (int i = 0; i < facilities; ++i) {
    fl.facilities.push_back(static_cast<int>(costs.size()));
    costs.push_back(round2(rng.uniform(0.5, 2.0)));
    names.push_back("f" + std::to_string(i + 1));
  }
  for (int i = 0; i < facilities; ++i) {
    for (int j = 0; j < clients; ++j) {
      const double d = std::hypot(fpos[i].first - cpos[j].first, fpos[i].second - cpos[j].second);
      fl.links.push_back({static_cast<int>(costs.size()), fl.facilities[i], j});
      costs.push_back(round2(d));
      names.push_back("f" + std::to_string(i + 1) + ":c" + std::to_string(j + 1));
    }
  }
  return ProblemInstance(labels("c", clients), std::move(names), std::move(costs), sigma, std::move(fl));
}

ProblemInstance random_set_cover(int clients, int sets, double sigma, Rng& rng) {
  if (clients < 1 || sets < 1) throw Error(ErrorKind::InvalidArgument, "set cover generator needs clients and sets");
  SetSystem s;
  for (int e = 0; e < sets; ++e) {
    Mask m = 0;
    while (m == 0) m = rng.next() & full_mask(clients);
    s.covers.push_back(m);
  }
  for (int j = 0; j < clients; ++j) {
    bool covered = false;
    for (Mask m : s.covers) covered = covered || contains(m, j);
    if (!covered) s.covers[rng.below(sets)] |= bit(j);
  }
  std::vector<double> costs;
  for (int e = 0; e < sets; ++e) costs.push_back(static_cast<double>(1 + rng.below(4)));
  return ProblemInstance(labels("u", clients), labels("S", sets), std::move(costs), sigma, std::move(s));
}

ProblemInstance random_vertex_cover(int vertices, int edges, double sigma, Rng& rng) {
  if (vertices < 2) throw Error(ErrorKind::InvalidArgument, "vertex cover generator needs two vertices");
  edges = std::min(edges, vertices * (vertices - 1) / 2);
  std::set<std::pair<int, int>> used;
  VertexCoverGraph g;
  std::vector<std::string> names;
  while (static_cast<int>(g.endpoints.size()) < edges) {
    int u = rng.below(vertices), v = rng.below(vertices);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (!used.insert({u, v}).second) continue;
    g.endpoints.push_back({u, v});
    names.push_back("x" + std::to_string(u + 1) + "-x" + std::to_string(v + 1));
  }
  std::vector<double> costs;
  for (int v = 0; v < vertices; ++v) costs.push_back(static_cast<double>(1 + rng.below(4)));
  return ProblemInstance(std::move(names), labels("x", vertices), std::move(costs), sigma, std::move(g));
}

ProblemInstance random_problem(ProblemKind kind, int a, int b, double sigma, Rng& rng) {
  switch (kind) {
    case ProblemKind::Steiner: return random_steiner(a, b, sigma, rng);
    case ProblemKind::FacilityLocation: return random_ufl(a, b, sigma, rng);
    case ProblemKind::SetCover: return random_set_cover(a, b, sigma, rng);
    case ProblemKind::VertexCover: return random_vertex_cover(a, b, sigma, rng);
    case ProblemKind::Custom: break;
  }
  throw Error(ErrorKind::InvalidArgument, "no generator for custom problems");
}

ScenarioDistribution random_explicit(int clients, int support, Rng& rng) {
  support = std::min<long>(support, 1L << clients);
  std::set<Mask> chosen;
  while (static_cast<int>(chosen.size()) < support) chosen.insert(rng.next() & full_mask(clients));
  std::vector<double> w;
  double total = 0.0;
  for (int k = 0; k < support; ++k) total += w.emplace_back(rng.uniform(0.1, 1.0));
  std::vector<WeightedScenario> scenarios;
  double acc = 0.0;
  int k = 0;
  for (Mask s : chosen) {
    const double p = (k + 1 == support) ? 1.0 - acc : w[k] / total;
    acc += p;
    scenarios.push_back({s, p});
    ++k;
  }
  return ScenarioDistribution::explicit_support(clients, std::move(scenarios));
}

ScenarioDistribution random_independent(int clients, Rng& rng) {
  std::vector<double> p;
  for (int j = 0; j < clients; ++j) p.push_back(round2(rng.uniform(0.05, 0.95)));
  return ScenarioDistribution::independent(std::move(p));
}

CoverageSpec random_coverage_spec(int items, int universe, Rng& rng) {
  CoverageSpec spec;
  for (int i = 0; i < items; ++i) {
    Mask m = 0;
    while (m == 0) m = rng.next() & full_mask(universe);
    spec.covers.push_back(m);
  }
  for (int u = 0; u < universe; ++u) spec.weights.push_back(round2(rng.uniform(0.1, 2.0)));
  return spec;
}

SetFunction random_coverage(int items, int universe, Rng& rng) { return random_coverage_spec(items, universe, rng).build(); }

GapInstance random_gap_instance(int items, Rng& rng) {
  SetFunction f = random_coverage(items, 2 + rng.below(5), rng);
  std::vector<double> p;
  for (int i = 0; i < items; ++i) p.push_back(round2(rng.uniform(0.05, 0.95)));
  return GapInstance(std::move(f), std::move(p));
}

StochasticLPInstance random_stochastic_lp(int m, int scenarios, Rng& rng) {
  Eigen::VectorXd wi(m);
  for (int e = 0; e < m; ++e) wi(e) = round2(rng.uniform(0.5, 2.0));
  std::vector<double> weights;
  double total = 0.0;
  for (int a = 0; a < scenarios; ++a) total += weights.emplace_back(rng.uniform(0.2, 1.0));
  std::vector<ScenarioBlock> blocks;
  double acc = 0.0;
  for (int a = 0; a < scenarios; ++a) {
    ScenarioBlock b;
    b.label = "A" + std::to_string(a);
    b.probability = (a + 1 == scenarios) ? 1.0 - acc : weights[a] / total;
    acc += b.probability;
    const int rows = 1 + rng.below(3);
    const int ns = 1 + rng.below(2);
    b.recourse_cost.resize(m);
    for (int e = 0; e < m; ++e) b.recourse_cost(e) = round2(wi(e) * rng.uniform(1.0, 3.0));
    b.assignment_cost.resize(ns);
    for (int k = 0; k < ns; ++k) b.assignment_cost(k) = round2(rng.uniform(1.0, 6.0));
    b.technology.resize(rows, m);
    b.assignment_matrix.resize(rows, ns);
    b.requirement.resize(rows);
    for (int r = 0; r < rows; ++r) {
      for (int e = 0; e < m; ++e) b.technology(r, e) = rng.bernoulli(0.7) ? round2(rng.uniform(0.2, 1.0)) : 0.0;
      for (int k = 0; k < ns; ++k) b.assignment_matrix(r, k) = rng.bernoulli(0.6) ? round2(rng.uniform(0.2, 1.0)) : 0.0;
      b.assignment_matrix(r, rng.below(ns)) = round2(rng.uniform(0.2, 1.0));
      b.requirement(r) = round2(rng.uniform(0.2, 2.0));
    }
    blocks.push_back(std::move(b));
  }
  return StochasticLPInstance(std::move(wi), std::move(blocks));
}

}  // namespace stochopt
