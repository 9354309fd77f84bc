#pragma once

#include <functional>
#include <vector>

#include "stochopt/oracles.hpp"
#include "stochopt/subset.hpp"

namespace stochopt {

inline constexpr int kMaxTabulatedGround = 20;

/// A set function on 2^V held as an explicit value table indexed by mask.
class SetFunction {
 public:
  SetFunction(int ground_size, std::vector<double> values);

  static SetFunction tabulate(int ground_size, const std::function<double(Mask)>& f);
  static SetFunction cardinality(int ground_size);
  /// f(S) = total weight of universe points covered by the items of S;
  /// covers[i] is the universe mask item i covers.
  static SetFunction coverage(std::vector<Mask> covers, std::vector<double> point_weights);
  /// f(S) = sum of the `rank` largest item weights in S (uniform-matroid
  /// weighted rank).
  static SetFunction weighted_rank(std::vector<double> item_weights, int rank);

  int ground_size() const { return n_; }
  double operator()(Mask s) const { return values_[s]; }
  const std::vector<double>& values() const { return values_; }

 private:
  int n_;
  std::vector<double> values_;
};

CheckReport check_monotone(const SetFunction& f, double tol = 1e-12);
CheckReport check_submodular(const SetFunction& f, double tol = 1e-12);

}  // namespace stochopt
