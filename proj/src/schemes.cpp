#include "stochopt/schemes.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

#include "stochopt/error.hpp"
#include "stochopt/random.hpp"

namespace stochopt {

OrderedCostShareScheme marginal_scheme(const SetFunction& f) {
  if (f.ground_size() <= 10) {
    if (auto r = check_monotone(f); !r.passed) throw Error(ErrorKind::NotMonotone, r.violation);
    if (auto r = check_submodular(f); !r.passed) throw Error(ErrorKind::NotSubmodular, r.violation);
  }
  auto table = std::make_shared<const SetFunction>(f);
  OrderedShare chi = [table](int item, Mask, std::span<const int> order) {
    Mask before = 0;
    for (int i : order) {
      if (i == item) return (*table)(before | bit(i)) - (*table)(before);
      before |= bit(i);
    }
    return 0.0;
  };
  return {std::move(chi), 1.0, 1.0};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio(double num, double den, double tol) {
  if (num <= tol) return 0.0;
  if (den <= tol) return kInf;
  return num / den;
}

class Checker {
 public:
  Checker(const OrderedCostShareScheme& scheme, const SetFunction& f, const SchemeCheckOptions& opts)
      : scheme_(scheme), f_(f), opts_(opts) {}

  /// Budget balance and weak summability for one ordered set.
  void visit(Mask s, const std::vector<int>& order) {
    ++result_.orderings_checked;
    double total = 0.0;
    for (int i : order) total += scheme_.chi(i, s, order);
    const double fs = f_(s);
    if (total > fs + opts_.tolerance && result_.within_budget) {
      result_.within_budget = false;
      note("shares exceed f on mask " + std::to_string(s));
    }
    result_.beta_hat = std::max(result_.beta_hat, ratio(fs, total, opts_.tolerance));

    double prefix_sum = 0.0;
    Mask prefix = 0;
    for (std::size_t l = 0; l < order.size(); ++l) {
      prefix |= bit(order[l]);
      prefix_sum += scheme_.chi(order[l], prefix, std::span<const int>(order.data(), l + 1));
    }
    result_.eta_hat = std::max(result_.eta_hat, ratio(prefix_sum, fs, opts_.tolerance));
  }

  /// χ(i, S, σ_T|S) ≥ χ(i, T, σ_T) for every S ⊆ T handed in by `accept`.
  template <class Accept>
  void cross_monotone(Mask t, const std::vector<int>& order_t, Accept&& accept) {
    for (Mask s = t;; s = (s - 1) & t) {
      if (s != 0 && accept(s, t)) {
        std::vector<int> order_s;
        for (int i : order_t)
          if (contains(s, i)) order_s.push_back(i);
        for (int i : order_s) {
          const double small = scheme_.chi(i, s, order_s);
          const double large = scheme_.chi(i, t, order_t);
          if (small < large - opts_.tolerance && result_.cross_monotone) {
            result_.cross_monotone = false;
            note("share of item " + std::to_string(i) + " grows from mask " + std::to_string(s) + " to mask " +
                 std::to_string(t));
          }
        }
      }
      if (s == 0) break;
    }
  }

  SchemeCheck take() { return std::move(result_); }

 private:
  void note(const std::string& w) {
    if (result_.witness.empty()) result_.witness = w;
  }

  const OrderedCostShareScheme& scheme_;
  const SetFunction& f_;
  const SchemeCheckOptions& opts_;
  SchemeCheck result_;
};

/// Calls `fn` with every ordering of `items` that keeps the block order of
/// `blocks` (first block first) and permutes freely inside blocks.
template <class Fn>
void for_each_block_ordering(const std::vector<std::vector<int>>& blocks, std::size_t k, std::vector<int>& prefix,
                             Fn&& fn) {
  if (k == blocks.size()) {
    fn(prefix);
    return;
  }
  std::vector<int> block = blocks[k];
  std::sort(block.begin(), block.end());
  do {
    const std::size_t mark = prefix.size();
    prefix.insert(prefix.end(), block.begin(), block.end());
    for_each_block_ordering(blocks, k + 1, prefix, fn);
    prefix.resize(mark);
  } while (std::next_permutation(block.begin(), block.end()));
}

}  // namespace

SchemeCheck check_scheme(const OrderedCostShareScheme& scheme, const SetFunction& f, const SchemeCheckOptions& opts) {
  const int n = f.ground_size();
  if (n > opts.max_ground)
    throw Error(ErrorKind::CapExceeded, "scheme checks are limited to " + std::to_string(opts.max_ground) + " items");
  Checker checker(scheme, f, opts);
  Rng rng = stream(opts.seed, "check_scheme");
  const bool full_cross = opts.partial_prefix_blocks == nullptr;

  for (Mask s = 1; s <= full_mask(n); ++s) {
    std::vector<int> order = members(s);
    auto handle = [&](const std::vector<int>& o) {
      checker.visit(s, o);
      if (full_cross) checker.cross_monotone(s, o, [](Mask, Mask) { return true; });
    };
    if (cardinality(s) <= opts.exhaustive_limit) {
      do handle(order);
      while (std::next_permutation(order.begin(), order.end()));
    } else {
      for (int k = 0; k < opts.sampled_orderings; ++k) {
        std::shuffle(order.begin(), order.end(), rng.engine());
        handle(order);
      }
    }
  }

  if (!full_cross) {
    const auto& blocks = *opts.partial_prefix_blocks;  // A_1..A_K
    const std::size_t K = blocks.size();
    Mask covered = 0;
    for (Mask b : blocks) covered |= b;
    if (covered != full_mask(n))
      throw Error(ErrorKind::InvalidArgument, "partial-prefix blocks must partition the ground set");
    // Block index of every item, and the ordering A_K, ..., A_1.
    std::vector<int> block_of(n, -1);
    std::vector<std::vector<int>> reversed;
    for (std::size_t k = K; k-- > 0;) reversed.push_back(members(blocks[k]));
    for (std::size_t k = 0; k < K; ++k)
      for (int i : members(blocks[k])) block_of[i] = static_cast<int>(k);
    auto partial_prefix = [&](Mask s, Mask t) {
      // Some k with S ⊆ A_K ∪ … ∪ A_k and T \ S ⊆ A_k ∪ … ∪ A_1.
      int lowest_s = static_cast<int>(K);
      for (int i : members(s)) lowest_s = std::min(lowest_s, block_of[i]);
      int highest_rest = -1;
      for (int i : members(t & ~s)) highest_rest = std::max(highest_rest, block_of[i]);
      return highest_rest <= lowest_s;
    };
    std::vector<int> prefix;
    for_each_block_ordering(reversed, 0, prefix, [&](const std::vector<int>& sigma) {
      for (Mask t = 1; t <= full_mask(n); ++t) {
        std::vector<int> order_t;
        for (int i : sigma)
          if (contains(t, i)) order_t.push_back(i);
        checker.cross_monotone(t, order_t, partial_prefix);
      }
    });
  }
  return checker.take();
}

}  // namespace stochopt
