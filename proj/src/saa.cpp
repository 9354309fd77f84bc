#include "stochopt/saa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "stochopt/error.hpp"

namespace stochopt {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

int dyadic_levels(double K, double R, double epsilon) {
  return std::max(1, static_cast<int>(std::ceil(std::log2(2.0 * K * R / epsilon))));
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be positive");
}

}  // namespace

SampleSizePlan sample_size(int m, double lambda, double K, double R, double epsilon, double delta, double gamma) {
  if (m <= 0) throw Error(ErrorKind::InvalidArgument, "m must be positive");
  require_positive(K, "K");
  require_positive(R, "R");
  require_positive(epsilon, "epsilon");
  require_positive(delta, "delta");
  require_positive(gamma, "gamma");
  if (lambda < 1.0) throw Error(ErrorKind::InvalidArgument, "lambda must be at least 1");
  if (gamma > 1.0 || delta >= 1.0) throw Error(ErrorKind::InvalidArgument, "need gamma <= 1 and delta < 1");

  SampleSizePlan plan;
  plan.levels = dyadic_levels(K, R, epsilon);
  plan.omega = gamma / (8.0 * plan.levels);
  plan.grid_spacing = epsilon / (K * plan.levels * std::sqrt(static_cast<double>(m)));
  plan.log_grid_bound = std::log(static_cast<double>(plan.levels)) + 2.0 * m * std::log(2.0 * R / plan.grid_spacing);
  plan.leading_factor = 4.0 * (1.0 + lambda) * (1.0 + lambda) / (3.0 * plan.omega * plan.omega);
  const double log_term = std::log(2.0 * m) + plan.log_grid_bound - std::log(delta);
  plan.samples = std::ceil(plan.leading_factor * log_term);
  return plan;
}

int GridSpec::levels() const {
  require_positive(epsilon, "epsilon");
  require_positive(lipschitz, "lipschitz bound");
  require_positive(radius, "radius");
  return dyadic_levels(lipschitz, radius, epsilon);
}

double GridSpec::spacing(int m) const { return epsilon / (lipschitz * levels() * std::sqrt(static_cast<double>(m))); }

double log_grid_bound(const GridSpec& spec, int m) {
  return std::log(static_cast<double>(spec.levels())) + 2.0 * m * std::log(2.0 * spec.radius / spec.spacing(m));
}

std::vector<VectorXd> base_grid(double spacing, const Polytope& polytope, int m, std::size_t cap) {
  if (m <= 0 || m > 3) throw Error(ErrorKind::InvalidArgument, "grids are built for 1 <= m <= 3 only");
  require_positive(spacing, "grid spacing");
  const long per_axis = static_cast<long>(std::floor(1.0 / spacing + 1e-9)) + 1;
  const double total = std::pow(static_cast<double>(per_axis), m);
  if (total > static_cast<double>(cap))
    throw Error(ErrorKind::CapExceeded, "base grid would have " + std::to_string(total) + " points");
  std::vector<VectorXd> points;
  std::vector<long> idx(m, 0);
  for (;;) {
    VectorXd p(m);
    for (int k = 0; k < m; ++k) p(k) = std::min(1.0, idx[k] * spacing);
    if (polytope.contains(p)) points.push_back(p);
    int k = 0;
    while (k < m && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == m) break;
  }
  return points;
}

std::vector<VectorXd> extended_grid(const GridSpec& spec, const Polytope& polytope, int m, std::size_t cap) {
  const auto base = base_grid(spec.spacing(m), polytope, m, cap);
  const int levels = spec.levels();
  const double bound = static_cast<double>(base.size()) * (1.0 + 2.0 * levels * static_cast<double>(base.size()));
  if (bound > static_cast<double>(cap))
    throw Error(ErrorKind::CapExceeded, "extended grid would have up to " + std::to_string(bound) + " points");

  // Keyed on coordinates rounded to 1e-12 so x+t(y-x) and y+(1-t)(x-y)
  // collapse to one point.
  std::map<std::vector<long long>, VectorXd> unique;
  auto add = [&](const VectorXd& p) {
    std::vector<long long> key(m);
    for (int k = 0; k < m; ++k) key[k] = std::llround(p(k) * 1e12);
    unique.emplace(std::move(key), p);
  };
  for (const auto& p : base) add(p);
  for (std::size_t a = 0; a < base.size(); ++a) {
    for (std::size_t b = a + 1; b < base.size(); ++b) {
      double t = 1.0;
      for (int i = 1; i <= levels; ++i) {
        t *= 0.5;
        add(base[a] + t * (base[b] - base[a]));
        add(base[b] + t * (base[a] - base[b]));
      }
    }
  }
  std::vector<VectorXd> out;
  out.reserve(unique.size());
  for (auto& [key, p] : unique) out.push_back(std::move(p));
  return out;
}

StochasticLPInstance build_sample_average(const StochasticLPInstance& instance, long samples, Rng& rng) {
  if (samples <= 0) throw Error(ErrorKind::InvalidArgument, "sample count must be positive");
  const auto& scenarios = instance.scenarios();
  if (scenarios.empty()) return instance;
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& s : scenarios) cumulative.push_back(acc += s.probability);

  std::vector<long> counts(scenarios.size(), 0);
  for (long k = 0; k < samples; ++k) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t a = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), scenarios.size() - 1);
    while (scenarios[a].probability == 0.0 && a > 0) --a;
    ++counts[a];
  }
  std::vector<ScenarioBlock> kept;
  for (std::size_t a = 0; a < scenarios.size(); ++a) {
    if (counts[a] == 0) continue;
    kept.push_back(scenarios[a]);
    kept.back().probability = static_cast<double>(counts[a]) / static_cast<double>(samples);
  }
  return StochasticLPInstance(instance.first_stage_cost(), std::move(kept), instance.polytope(), instance.radius());
}

MinimizeResult minimize(const StochasticLPInstance& instance, const MinimizeOptions& opts) {
  const int m = instance.dimension();
  const auto weights = instance.probabilities();
  const Polytope& poly = instance.polytope();

  double g_bar = instance.lipschitz_bound();
  const bool adaptive = !(std::isfinite(g_bar) && g_bar > 0.0);
  if (adaptive) g_bar = 0.0;

  MinimizeResult out;
  VectorXd x = poly.project(VectorXd::Constant(m, 0.5));
  if (!poly.contains(x, 1e-7)) throw Error(ErrorKind::Infeasible, "first-stage polytope appears to be empty");
  out.value = std::numeric_limits<double>::infinity();
  std::vector<double> best_history;
  best_history.reserve(opts.max_iterations);

  for (int t = 1; t <= opts.max_iterations; ++t) {
    const SubgradientVector g = subgradient_at(instance, x, weights);
    if (g.value < out.value) {
      out.value = g.value;
      out.x = x;
    }
    best_history.push_back(out.value);
    out.iterations = t;

    const double norm = g.d.norm();
    if (adaptive) g_bar = std::max(g_bar, norm);
    const double step = g_bar > 0.0 ? (instance.radius() / g_bar) / std::sqrt(static_cast<double>(t)) : 0.0;
    if (opts.record_trace) out.trace.push_back({t, g.value, step});
    if (norm == 0.0) {
      out.converged = true;
      break;
    }
    if (t > opts.patience) {
      const double earlier = best_history[t - 1 - opts.patience];
      if (earlier - out.value < opts.tolerance * (1.0 + std::abs(out.value))) {
        out.converged = true;
        break;
      }
    }
    x = poly.project(x - step * g.d);
  }
  return out;
}

OmegaCheck check_omega_subgradient(const std::function<double(const VectorXd&)>& h, const VectorXd& x,
                                   const VectorXd& d, double omega, const Polytope& polytope, int trials, Rng& rng) {
  if (omega < 0.0) throw Error(ErrorKind::InvalidArgument, "omega must be nonnegative");
  const double hx = h(x);
  OmegaCheck out;
  for (int k = 0; k < trials; ++k) {
    VectorXd y(x.size());
    bool found = false;
    for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
      for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = rng.uniform();
      found = polytope.contains(y);
    }
    if (!found) continue;
    const double slack = h(y) - hx - d.dot(y - x) + omega * hx + 1e-7;
    if (slack < 0.0) {
      out.holds = false;
      out.witness = y;
      out.violation = -slack;
      return out;
    }
  }
  return out;
}

StochasticLPInstance encode_ufl(const TwoStageUfl& ufl) {
  const Eigen::Index nf = ufl.first_stage_opening.size();
  if (ufl.distance.rows() != nf) throw Error(ErrorKind::InvalidArgument, "distance matrix needs one row per facility");
  std::vector<ScenarioBlock> blocks;
  int index = 0;
  for (const auto& sc : ufl.scenarios) {
    if (sc.opening_cost.size() != nf) throw Error(ErrorKind::InvalidArgument, "scenario opening costs need one entry per facility");
    const Eigen::Index nc = static_cast<Eigen::Index>(sc.clients.size());
    const Eigen::Index rows = nc * nf + nc;
    ScenarioBlock b;
    b.probability = sc.probability;
    b.label = "A" + std::to_string(index++);
    b.recourse_cost = sc.opening_cost;
    b.assignment_cost.resize(nc * nf);
    b.assignment_matrix = MatrixXd::Zero(rows, nc * nf);
    b.technology = MatrixXd::Zero(rows, nf);
    b.requirement = VectorXd::Zero(rows);
    for (Eigen::Index k = 0; k < nc; ++k) {
      const int client = sc.clients[k];
      if (client < 0 || client >= ufl.distance.cols()) throw Error(ErrorKind::InvalidArgument, "scenario client out of range");
      for (Eigen::Index i = 0; i < nf; ++i) {
        const Eigen::Index var = k * nf + i;
        const Eigen::Index row = k * nf + i;
        b.assignment_cost(var) = ufl.distance(i, client);
        // s_ij ≤ x_i + r_i
        b.assignment_matrix(row, var) = -1.0;
        b.technology(row, i) = 1.0;
        // Σ_i s_ij ≥ 1
        b.assignment_matrix(nc * nf + k, var) = 1.0;
      }
      b.requirement(nc * nf + k) = 1.0;
    }
    blocks.push_back(std::move(b));
  }
  return StochasticLPInstance(ufl.first_stage_opening, std::move(blocks));
}

}  // namespace stochopt
