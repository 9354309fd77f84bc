#include "stochopt/set_function.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "stochopt/error.hpp"

namespace stochopt {

SetFunction::SetFunction(int ground_size, std::vector<double> values) : n_(ground_size), values_(std::move(values)) {
  if (n_ < 0 || n_ > kMaxTabulatedGround)
    throw Error(ErrorKind::CapExceeded, "set function tables are limited to " + std::to_string(kMaxTabulatedGround) + " items");
  if (values_.size() != (std::size_t{1} << n_))
    throw Error(ErrorKind::InvalidArgument, "set function table must have 2^n entries");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "set function values must be finite");
}

SetFunction SetFunction::tabulate(int ground_size, const std::function<double(Mask)>& f) {
  if (ground_size < 0 || ground_size > kMaxTabulatedGround)
    throw Error(ErrorKind::CapExceeded, "set function tables are limited to " + std::to_string(kMaxTabulatedGround) + " items");
  std::vector<double> values(std::size_t{1} << ground_size);
  for (Mask s = 0; s < values.size(); ++s) values[s] = f(s);
  return {ground_size, std::move(values)};
}

SetFunction SetFunction::cardinality(int ground_size) {
  return tabulate(ground_size, [](Mask s) { return static_cast<double>(stochopt::cardinality(s)); });
}

SetFunction SetFunction::coverage(std::vector<Mask> covers, std::vector<double> point_weights) {
  for (double w : point_weights)
    if (w < 0.0) throw Error(ErrorKind::InvalidArgument, "coverage weights must be nonnegative");
  const int n = static_cast<int>(covers.size());
  const Mask universe = full_mask(static_cast<int>(point_weights.size()));
  for (Mask c : covers)
    if (!is_subset(c, universe)) throw Error(ErrorKind::InvalidArgument, "coverage item mentions an unknown point");
  return tabulate(n, [&](Mask s) {
    Mask covered = 0;
    for (int i : members(s)) covered |= covers[i];
    double total = 0.0;
    for (int p : members(covered)) total += point_weights[p];
    return total;
  });
}

SetFunction SetFunction::weighted_rank(std::vector<double> item_weights, int rank) {
  for (double w : item_weights)
    if (w < 0.0) throw Error(ErrorKind::InvalidArgument, "rank weights must be nonnegative");
  if (rank < 0) throw Error(ErrorKind::InvalidArgument, "rank must be nonnegative");
  const int n = static_cast<int>(item_weights.size());
  return tabulate(n, [&](Mask s) {
    std::vector<double> w;
    for (int i : members(s)) w.push_back(item_weights[i]);
    std::sort(w.begin(), w.end(), std::greater<>());
    double total = 0.0;
    for (int k = 0; k < std::min<int>(rank, static_cast<int>(w.size())); ++k) total += w[k];
    return total;
  });
}

CheckReport check_monotone(const SetFunction& f, double tol) {
  const Mask all = full_mask(f.ground_size());
  for (Mask s = 0; s <= all; ++s)
    for (int i = 0; i < f.ground_size(); ++i)
      if (!contains(s, i) && f(s | bit(i)) < f(s) - tol)
        return {false, "f decreases when item " + std::to_string(i) + " joins mask " + std::to_string(s)};
  return {};
}

CheckReport check_submodular(const SetFunction& f, double tol) {
  const int n = f.ground_size();
  const Mask all = full_mask(n);
  for (Mask s = 0; s <= all; ++s)
    for (int i = 0; i < n; ++i) {
      if (contains(s, i)) continue;
      for (int j = i + 1; j < n; ++j) {
        if (contains(s, j)) continue;
        if (f(s | bit(i)) + f(s | bit(j)) < f(s | bit(i) | bit(j)) + f(s) - tol)
          return {false, "marginal of item " + std::to_string(j) + " grows when item " + std::to_string(i) +
                             " joins mask " + std::to_string(s)};
      }
    }
  return {};
}

}  // namespace stochopt
