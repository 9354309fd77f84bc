#include "stochopt/correlation_gap.hpp"

#include <cmath>
#include <numbers>

#include "stochopt/error.hpp"
#include "stochopt/lp.hpp"
#include "stochopt/random.hpp"

namespace stochopt {

namespace {

constexpr double kZ99 = 2.5758293035489004;

}  // namespace

GapInstance::GapInstance(SetFunction fn, std::vector<double> p, std::vector<std::string> labels)
    : f(std::move(fn)), marginals(std::move(p)), names(std::move(labels)) {
  if (static_cast<int>(marginals.size()) != f.ground_size())
    throw Error(ErrorKind::InvalidArgument, "one marginal per item is required");
  for (double pi : marginals)
    if (!(pi >= 0.0 && pi <= 1.0)) throw Error(ErrorKind::InvalidArgument, "marginals must lie in [0,1]");
  if (f(0) < 0.0) throw Error(ErrorKind::InvalidArgument, "f(empty set) must be nonnegative");
  if (!names.empty() && static_cast<int>(names.size()) != f.ground_size())
    throw Error(ErrorKind::InvalidArgument, "one name per item is required");
  if (const auto r = check_monotone(f); !r.passed) throw Error(ErrorKind::NotMonotone, r.violation);
}

WorstCase worst_case_expectation(const GapInstance& inst, int cap) {
  const int n = inst.size();
  if (n > cap) throw Error(ErrorKind::CapExceeded, "worst-case LP over 2^" + std::to_string(n) + " sets (cap 2^" + std::to_string(cap) + ")");
  const Eigen::Index sets = Eigen::Index{1} << n;
  // Equalities as paired ≥ rows: marginals first, then total probability.
  LinearProgramd lp;
  lp.objective.resize(sets);
  lp.constraints = Eigen::MatrixXd::Zero(2 * n + 2, sets);
  lp.rhs.resize(2 * n + 2);
  for (Eigen::Index s = 0; s < sets; ++s) {
    lp.objective(s) = -inst.f(static_cast<Mask>(s));
    for (int i = 0; i < n; ++i) {
      if (contains(static_cast<Mask>(s), i)) {
        lp.constraints(2 * i, s) = 1.0;
        lp.constraints(2 * i + 1, s) = -1.0;
      }
    }
    lp.constraints(2 * n, s) = 1.0;
    lp.constraints(2 * n + 1, s) = -1.0;
  }
  for (int i = 0; i < n; ++i) {
    lp.rhs(2 * i) = inst.marginals[i];
    lp.rhs(2 * i + 1) = -inst.marginals[i];
  }
  lp.rhs(2 * n) = 1.0;
  lp.rhs(2 * n + 1) = -1.0;

  SimplexOptions opts;
  opts.max_variables = sets;
  const LPResultd r = solve_lp(lp, opts);
  if (r.status != LPStatus::Optimal)
    throw Error(ErrorKind::NumericalFailure, std::string("worst-case LP ended ") + to_string(r.status));
  WorstCase out;
  out.value = -r.value;
  out.alpha.assign(r.primal.data(), r.primal.data() + sets);
  return out;
}

Expectation independent_expectation(const GapInstance& inst, const IndependentOptions& opts) {
  const int n = inst.size();
  Expectation out;
  if (!opts.monte_carlo) {
    // prob[S] built one item at a time.
    std::vector<double> prob{1.0};
    for (int i = 0; i < n; ++i) {
      const double p = inst.marginals[i];
      std::vector<double> next(prob.size() * 2);
      for (std::size_t s = 0; s < prob.size(); ++s) {
        next[s] = prob[s] * (1.0 - p);
        next[s | (std::size_t{1} << i)] = prob[s] * p;
      }
      prob.swap(next);
    }
    for (std::size_t s = 0; s < prob.size(); ++s) out.value += prob[s] * inst.f(static_cast<Mask>(s));
    out.runs = static_cast<long>(prob.size());
    return out;
  }
  if (opts.runs < 2) throw Error(ErrorKind::InvalidArgument, "Monte Carlo needs at least 2 runs");
  Rng rng = stream(opts.seed, "independent_expectation");
  double sum = 0.0, sum_sq = 0.0;
  for (long k = 0; k < opts.runs; ++k) {
    Mask s = 0;
    for (int i = 0; i < n; ++i)
      if (rng.bernoulli(inst.marginals[i])) s |= bit(i);
    const double v = inst.f(s);
    sum += v;
    sum_sq += v * v;
  }
  const double runs = static_cast<double>(opts.runs);
  out.value = sum / runs;
  const double var = std::max(0.0, (sum_sq - runs * out.value * out.value) / (runs - 1.0));
  out.ci_halfwidth = kZ99 * std::sqrt(var / runs);
  out.exact = false;
  out.runs = opts.runs;
  return out;
}

double gap_bound(double eta, double beta) { return eta * beta * std::numbers::e / (std::numbers::e - 1.0); }

GapReport correlation_gap(const GapInstance& inst, const IndependentOptions& opts) {
  GapReport report;
  const WorstCase wc = worst_case_expectation(inst);
  report.independent_detail = independent_expectation(inst, opts);
  report.worst_case = wc.value;
  report.independent = report.independent_detail.value;
  report.worst_distribution = wc.alpha;
  if (report.independent <= 0.0)
    throw Error(ErrorKind::DegenerateInstance, "independent expectation is zero, so the correlation gap is undefined");
  report.kappa = report.worst_case / report.independent;
  return report;
}

SplitMap::SplitMap(std::vector<int> copies) : copies_(std::move(copies)) {
  for (std::size_t i = 0; i < copies_.size(); ++i) {
    if (copies_[i] < 1) throw Error(ErrorKind::InvalidArgument, "every item needs at least one copy");
    first_.push_back(static_cast<int>(projection_.size()));
    projection_.insert(projection_.end(), copies_[i], static_cast<int>(i));
  }
  if (projection_.size() > static_cast<std::size_t>(kMaxGround))
    throw Error(ErrorKind::CapExceeded, "split ground set has " + std::to_string(projection_.size()) + " items");
}

Mask SplitMap::copies_mask(int item) const {
  Mask m = 0;
  for (int c = 0; c < copies_[item]; ++c) m |= bit(first_[item] + c);
  return m;
}

Mask SplitMap::project(Mask split_set) const {
  Mask out = 0;
  for (int c : members(split_set)) out |= bit(projection_[c]);
  return out;
}

GapInstance split(const GapInstance& inst, const SplitMap& map) {
  if (map.original_size() != inst.size()) throw Error(ErrorKind::InvalidArgument, "split map does not match the instance");
  const int n = map.split_size();
  if (n > kMaxTabulatedGround) throw Error(ErrorKind::CapExceeded, "split instance has " + std::to_string(n) + " items");
  std::vector<double> p(n);
  std::vector<std::string> names;
  for (int c = 0; c < n; ++c) {
    const int i = map.original(c);
    p[c] = inst.marginals[i] / map.copies(i);
    if (!inst.names.empty()) names.push_back(inst.names[i] + "#" + std::to_string(c - map.first_copy(i) + 1));
  }
  SetFunction f = SetFunction::tabulate(n, [&](Mask s) { return inst.f(map.project(s)); });
  return GapInstance(std::move(f), std::move(p), std::move(names));
}

OrderedCostShareScheme split_scheme(const OrderedCostShareScheme& scheme, const SplitMap& map) {
  OrderedCostShareScheme out = scheme;
  out.chi = [chi = scheme.chi, map](int item, Mask served, std::span<const int> order) {
    const int original = map.original(item);
    std::vector<int> induced;
    Mask seen = 0;
    bool first = false;
    for (int c : order) {
      const int o = map.original(c);
      if (contains(seen, o)) continue;
      seen |= bit(o);
      induced.push_back(o);
      if (c == item) first = true;
    }
    if (!first) return 0.0;
    return chi(original, map.project(served), induced);
  };
  return out;
}

std::vector<double> split_distribution(const std::vector<double>& alpha, const SplitMap& map) {
  const int n = map.split_size();
  std::vector<double> out(std::size_t{1} << n, 0.0);
  for (Mask s = 0; s < out.size(); ++s) {
    double scale = 1.0;
    bool single = true;
    for (int i = 0; i < map.original_size() && single; ++i) {
      const int k = cardinality(s & map.copies_mask(i));
      if (k > 1) single = false;
      else if (k == 1) scale /= map.copies(i);
    }
    if (single) out[s] = alpha[map.project(s)] * scale;
  }
  return out;
}

SplitInvariants check_split_invariants(const GapInstance& inst, const SplitMap& map) {
  SplitInvariants r;
  const GapInstance sp = split(inst, map);
  const auto mono = check_monotone(sp.f);
  r.split_monotone = mono.passed;
  r.worst_case = worst_case_expectation(inst).value;
  r.worst_case_split = worst_case_expectation(sp).value;
  r.independent = independent_expectation(inst).value;
  r.independent_split = independent_expectation(sp).value;
  if (!mono.passed) r.violation = "split function not monotone: " + mono.violation;
  else if (std::abs(r.worst_case - r.worst_case_split) > 1e-7)
    r.violation = "worst case changed from " + std::to_string(r.worst_case) + " to " + std::to_string(r.worst_case_split);
  else if (r.independent_split > r.independent + 1e-9)
    r.violation = "independent expectation grew from " + std::to_string(r.independent) + " to " +
                  std::to_string(r.independent_split);
  return r;
}

bool verify_gap_bound(const GapInstance& inst, double eta, double beta, const SchemeCheck& certificate) {
  if (!certificate.certifies(eta, beta))
    throw Error(ErrorKind::UncertifiedScheme, "scheme check does not certify eta=" + std::to_string(eta) +
                                                  " beta=" + std::to_string(beta));
  return correlation_gap(inst).kappa <= gap_bound(eta, beta) + 1e-6;
}

std::optional<std::vector<Mask>> k_partition_support(const std::vector<double>& alpha, int n, double tol) {
  std::vector<Mask> blocks;
  double weight = -1.0;
  Mask covered = 0;
  for (Mask s = 0; s < alpha.size(); ++s) {
    if (alpha[s] <= tol) continue;
    if (s == 0 || (covered & s) != 0) return std::nullopt;
    if (weight < 0.0) weight = alpha[s];
    else if (std::abs(alpha[s] - weight) > tol) return std::nullopt;
    covered |= s;
    blocks.push_back(s);
  }
  if (blocks.empty() || covered != full_mask(n)) return std::nullopt;
  if (std::abs(weight * static_cast<double>(blocks.size()) - 1.0) > tol * static_cast<double>(blocks.size()))
    return std::nullopt;
  return blocks;
}

double k_partition_value(const SetFunction& f, const std::vector<Mask>& blocks) {
  double total = 0.0;
  for (Mask b : blocks) total += f(b);
  return total / static_cast<double>(blocks.size());
}

}  // namespace stochopt
