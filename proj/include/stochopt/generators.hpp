#pragma once

#include <string>

#include "stochopt/correlation_gap.hpp"
#include "stochopt/distribution.hpp"
#include "stochopt/problem.hpp"
#include "stochopt/random.hpp"
#include "stochopt/stochastic_lp.hpp"

namespace stochopt {

/// Connected graph on `clients` vertices: a random spanning tree plus random
/// extra edges up to `edges` in total. Integer costs in [1, 5].
ProblemInstance random_steiner(int clients, int edges, double sigma, Rng& rng);
/// Facilities and clients at random points of the unit square; links priced
/// by Euclidean distance, openings in [0.5, 2].
ProblemInstance random_ufl(int facilities, int clients, double sigma, Rng& rng);
/// Random sets over the clients, patched so every client is coverable.
ProblemInstance random_set_cover(int clients, int sets, double sigma, Rng& rng);
/// Random simple graph; clients are its edges, elements its vertices.
ProblemInstance random_vertex_cover(int vertices, int edges, double sigma, Rng& rng);
ProblemInstance random_problem(ProblemKind kind, int size_a, int size_b, double sigma, Rng& rng);

/// `support` distinct client sets with random probabilities summing to 1.
ScenarioDistribution random_explicit(int clients, int support, Rng& rng);
ScenarioDistribution random_independent(int clients, Rng& rng);

struct CoverageSpec {
  std::vector<Mask> covers;  // per item, over the universe points
  std::vector<double> weights;

  SetFunction build() const { return SetFunction::coverage(covers, weights); }
};

/// Weighted coverage over a universe of `universe` points; each item covers
/// a random nonempty subset.
CoverageSpec random_coverage_spec(int items, int universe, Rng& rng);
SetFunction random_coverage(int items, int universe, Rng& rng);
GapInstance random_gap_instance(int items, Rng& rng);

/// Covering-type stochastic LP whose recourse is feasible for every x in the
/// unit box: D ≥ 0 has a positive entry in every row.
StochasticLPInstance random_stochastic_lp(int m, int scenarios, Rng& rng);

}  // namespace stochopt
