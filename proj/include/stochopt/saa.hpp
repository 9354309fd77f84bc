#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "stochopt/random.hpp"
#include "stochopt/stochastic_lp.hpp"

namespace stochopt {

/// Sample-size bookkeeping. `samples` is kept as a double because the
/// formula overflows any integer type for all but toy parameters.
struct SampleSizePlan {
  int levels = 0;               // N = ⌈log₂(2KR/ε)⌉
  double omega = 0.0;           // γ/(8N)
  double grid_spacing = 0.0;    // ε/(KN√m)
  double log_grid_bound = 0.0;  // ln n with n = N·(2R/spacing)^{2m}
  double leading_factor = 0.0;  // 4(1+λ)²/(3ω²)
  double samples = 0.0;         // ⌈leading_factor · ln(2mn/δ)⌉
};

SampleSizePlan sample_size(int m, double lambda, double K, double R, double epsilon, double delta, double gamma);

struct GridSpec {
  double epsilon = 0.0;
  double gamma = 1.0;
  double lipschitz = 1.0;  // K
  double radius = 1.0;     // R

  int levels() const;
  double omega() const { return gamma / (8.0 * levels()); }
  double spacing(int m) const;
};

/// Points of the axis-aligned grid of the given spacing inside the polytope.
std::vector<Eigen::VectorXd> base_grid(double spacing, const Polytope& polytope, int m,
                                       std::size_t cap = 1'000'000);

/// Base grid plus x + t(y-x) and y + t(x-y) for every pair and t = 2^-i,
/// i = 1..N. Duplicates are removed.
std::vector<Eigen::VectorXd> extended_grid(const GridSpec& spec, const Polytope& polytope, int m,
                                           std::size_t cap = 1'000'000);

/// ln of the grid-size bound N·(2R/spacing)^{2m}.
double log_grid_bound(const GridSpec& spec, int m);

/// Draws `samples` scenarios by their probabilities and returns the instance
/// restricted to the sampled ones, weighted by empirical frequency.
StochasticLPInstance build_sample_average(const StochasticLPInstance& instance, long samples, Rng& rng);

struct TraceRow {
  int iteration = 0;
  double value = 0.0;
  double step = 0.0;
};

struct MinimizeOptions {
  int max_iterations = 10'000;
  int patience = 500;
  double tolerance = 1e-7;
  bool record_trace = false;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<TraceRow> trace;
};

/// Projected subgradient descent on the instance's objective with steps
/// (R/Ḡ)/√t. Returns the best iterate seen.
MinimizeResult minimize(const StochasticLPInstance& instance, const MinimizeOptions& opts = {});

struct OmegaCheck {
  bool holds = true;
  Eigen::VectorXd witness;
  double violation = 0.0;
};

/// Samples points y of the polytope and tests
/// h(y) - h(x) ≥ d·(y-x) - ω·h(x) - 1e-7.
OmegaCheck check_omega_subgradient(const std::function<double(const Eigen::VectorXd&)>& h, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& d, double omega, const Polytope& polytope, int trials,
                                   Rng& rng);

/// Two-stage facility location in LP form. Distances are facility × client.
struct TwoStageUfl {
  struct Scenario {
    double probability = 0.0;
    std::vector<int> clients;
    Eigen::VectorXd opening_cost;
  };
  Eigen::VectorXd first_stage_opening;
  Eigen::MatrixXd distance;
  std::vector<Scenario> scenarios;
};

StochasticLPInstance encode_ufl(const TwoStageUfl& ufl);

}  // namespace stochopt
