#pragma once

#include "stochopt/problem.hpp"
#include "stochopt/set_function.hpp"

namespace fixtures {

using namespace stochopt;

// Triangle 1-2-3; edges (1,2)=1, (2,3)=1, (1,3)=3, rooted at vertex 1.
inline ProblemInstance tri3(double sigma = 1.0, int root = 0) {
  return ProblemInstance({"1", "2", "3"}, {"(1,2)", "(2,3)", "(1,3)"}, {1.0, 1.0, 3.0}, sigma,
                         SteinerGraph{{{0, 1}, {1, 2}, {0, 2}}, root});
}

// One client j, one element e of cost 1; j is served iff e is bought.
inline ProblemInstance edge1(double sigma = 1.0) {
  return ProblemInstance({"j"}, {"e"}, {1.0}, sigma, SetSystem{{0b1}});
}

// Universe {1,2,3}; unit-cost sets {1,2}, {2,3}, {3}.
inline ProblemInstance cov3(double sigma = 1.0) {
  return ProblemInstance({"1", "2", "3"}, {"{1,2}", "{2,3}", "{3}"}, {1.0, 1.0, 1.0}, sigma,
                         SetSystem{{0b011, 0b110, 0b100}});
}

// Two disjoint copies of EDGE1.
inline ProblemInstance edge1_twice(double sigma = 1.0) {
  return ProblemInstance({"j1", "j2"}, {"e1", "e2"}, {1.0, 1.0}, sigma, SetSystem{{0b01, 0b10}});
}

// f(S) = min(|S|, 1) on {a, b}.
inline SetFunction gap2_function() {
  return SetFunction::tabulate(2, [](Mask s) { return s == 0 ? 0.0 : 1.0; });
}

}  // namespace fixtures
