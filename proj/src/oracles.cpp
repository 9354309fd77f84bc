#include "stochopt/oracles.hpp"

#include <cstdlib>

#include "stochopt/error.hpp"

namespace stochopt {

namespace {

int env_int(const char* name, int fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v <= 0 || v > kMaxGround) throw Error(ErrorKind::InvalidArgument, std::string("bad value for ") + name);
  return static_cast<int>(v);
}

}  // namespace

Caps Caps::from_env() {
  Caps caps;
  caps.exact_elements = env_int("STOCHOPT_CAP_EXACT_ELEMENTS", caps.exact_elements);
  caps.support_clients = env_int("STOCHOPT_CAP_SUPPORT", caps.support_clients);
  caps.pair_clients = env_int("STOCHOPT_CAP_PAIR_CLIENTS", caps.pair_clients);
  caps.pair_elements = env_int("STOCHOPT_CAP_PAIR_ELEMENTS", caps.pair_elements);
  return caps;
}

Solution exact_opt(const ProblemInstance& problem, Mask clients, Mask base, const Caps& caps) {
  const Mask free = problem.all_elements() & ~base;
  if (cardinality(free) > caps.exact_elements)
    throw Error(ErrorKind::CapExceeded, "exact_opt over " + std::to_string(cardinality(free)) + " free elements");
  if (problem.feasible(base, clients)) return {0, 0.0};

  bool found = false;
  Solution best;
  // Walk every submask of `free`, from free down to 0.
  for (Mask f = free;; f = (f - 1) & free) {
    const double c = problem.cost(f);
    const bool cheaper = !found || c < best.cost - kCostTolerance;
    const bool tie = found && !cheaper && c <= best.cost + kCostTolerance;
    if ((cheaper || (tie && lex_less(f, best.chosen))) && problem.feasible(base | f, clients)) {
      found = true;
      best = {f, c};
    }
    if (f == 0) break;
  }
  if (!found)
    throw Error(ErrorKind::Infeasible,
                "no element subset serves clients " + format_mask(clients, problem.clients()));
  return best;
}

std::vector<Solution> opt_table(const ProblemInstance& problem, const Caps& caps) {
  std::vector<Solution> table;
  table.reserve(std::size_t{1} << problem.num_clients());
  for (Mask s = 0; s <= problem.all_clients(); ++s) table.push_back(exact_opt(problem, s, 0, caps));
  return table;
}

CheckReport check_subadditive(const ProblemInstance& problem, const Caps& caps) {
  if (problem.num_clients() > caps.pair_clients || problem.num_elements() > caps.pair_elements)
    throw Error(ErrorKind::CapExceeded, "subadditivity check needs |V| <= " + std::to_string(caps.pair_clients) +
                                            " and |X| <= " + std::to_string(caps.pair_elements));
  const auto& names = problem.clients();
  std::vector<Solution> opt;
  try {
    opt = opt_table(problem, caps);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Infeasible) throw;
    return {false, e.what()};
  }
  for (Mask s = 0; s <= problem.all_clients(); ++s) {
    for (Mask t = 0; t <= problem.all_clients(); ++t) {
      const Mask u = s | t;
      if (!problem.feasible(opt[s].chosen | opt[t].chosen, u))
        return {false, "OPT(" + format_mask(s, names) + ") ∪ OPT(" + format_mask(t, names) + ") does not serve " +
                           format_mask(u, names)};
      if (opt[u].cost > opt[s].cost + opt[t].cost + kCostTolerance)
        return {false, "c(OPT(" + format_mask(u, names) + ")) exceeds c(OPT(" + format_mask(s, names) + ")) + c(OPT(" +
                           format_mask(t, names) + "))"};
    }
  }
  return {};
}

CheckReport check_feasibility_monotone(const ProblemInstance& problem, const Caps& caps) {
  if (problem.num_clients() > caps.pair_clients || problem.num_elements() > caps.pair_elements)
    throw Error(ErrorKind::CapExceeded, "feasibility monotonicity check is over the pairwise caps");
  if (!problem.feasible(0, 0)) return {false, "the empty element set does not serve the empty client set"};
  for (Mask s = 0; s <= problem.all_clients(); ++s) {
    for (Mask f = 0; f <= problem.all_elements(); ++f) {
      if (!problem.feasible(f, s)) continue;
      for (int e = 0; e < problem.num_elements(); ++e) {
        if (contains(f, e)) continue;
        if (!problem.feasible(f | bit(e), s))
          return {false, format_mask(f, problem.elements()) + " serves " + format_mask(s, problem.clients()) +
                             " but adding " + problem.elements()[e] + " breaks it"};
      }
    }
  }
  return {};
}

}  // namespace stochopt
