#include "stochopt/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "stochopt/boosted_sampling.hpp"
#include "stochopt/cost_sharing.hpp"
#include "stochopt/error.hpp"
#include "stochopt/saa.hpp"

namespace stochopt {

namespace {

// JSON has no infinity; unbounded ratios are written as null.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json names_of(Mask m, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (int i : members(m)) out.push_back(names[i]);
  return out;
}

Json vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::uint64_t require_seed(const RunConfig& c) {
  if (!c.seed) throw Error(ErrorKind::InvalidArgument, c.command + " is stochastic and needs --seed");
  return *c.seed;
}

// Optional oracle parts of a report: a cap overrun leaves the field null and
// records why instead of failing the whole run.
template <class F>
Json optional_oracle(Json& notes, const char* what, F&& compute) {
  try {
    return compute();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::CapExceeded) throw;
    notes.push_back(std::string(what) + " skipped: " + e.what());
    return nullptr;
  }
}

Json config_echo(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  if (!c.instance_path.empty()) j["instance"] = std::filesystem::path(c.instance_path).filename().string();
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["mode"] = c.mode;
  if (c.mode == "mc") j["runs"] = c.runs;
  if (c.command == "run-saa") {
    j["samples"] = c.samples;
    j["epsilon"] = c.epsilon;
    j["delta"] = c.delta;
    j["gamma"] = c.gamma;
  }
  if (!c.suite.empty()) j["suite"] = c.suite;
  j["caps"] = {{"exact_elements", c.caps.exact_elements},
               {"support_clients", c.caps.support_clients},
               {"pair_clients", c.caps.pair_clients},
               {"pair_elements", c.caps.pair_elements}};
  return j;
}

Json base_report(const RunConfig& c) {
  Json r;
  r["artifact"] = {{"name", "stochopt"}, {"version", kArtifactVersion}};
  r["config"] = config_echo(c);
  r["records"] = Json::array();
  r["notes"] = Json::array();
  return r;
}

// ---- gen ------------------------------------------------------------------

Json generate(const RunConfig& c) {
  Rng rng = stream(require_seed(c), "gen");
  if (c.kind == "gap") {
    const auto spec = random_coverage_spec(c.size_a, c.size_b, rng);
    std::vector<double> p;
    for (int i = 0; i < c.size_a; ++i) p.push_back(std::round(rng.uniform(0.05, 0.95) * 100.0) / 100.0);
    return gap_to_json(spec, p);
  }
  if (c.kind == "slp") return to_json(random_stochastic_lp(c.size_a, c.size_b, rng));

  ProblemKind kind;
  if (c.kind == "steiner") kind = ProblemKind::Steiner;
  else if (c.kind == "ufl") kind = ProblemKind::FacilityLocation;
  else if (c.kind == "set_cover") kind = ProblemKind::SetCover;
  else if (c.kind == "vertex_cover") kind = ProblemKind::VertexCover;
  else throw Error(ErrorKind::InvalidArgument, "unknown --kind '" + c.kind + "' (steiner, ufl, set_cover, vertex_cover, gap, slp)");
  const ProblemInstance p = random_problem(kind, c.size_a, c.size_b, c.sigma, rng);
  if (c.distribution == "explicit") return to_json(p, random_explicit(p.num_clients(), c.support, rng));
  if (c.distribution == "independent") return to_json(p, random_independent(p.num_clients(), rng));
  throw Error(ErrorKind::InvalidArgument, "unknown --distribution '" + c.distribution + "' (explicit, independent)");
}

// ---- two-stage commands ---------------------------------------------------

TwoStageInstance load_two_stage(const RunConfig& c) {
  const Json j = read_json_file(c.instance_path);
  if (detect_instance_kind(j) != InstanceKind::TwoStage)
    throw Error(ErrorKind::SchemaError, c.command + " expects a two-stage problem instance");
  return two_stage_from_json(j);
}

Json solve_det(const RunConfig& c) {
  const auto inst = load_two_stage(c);
  const auto& p = inst.problem;
  const auto alg = default_algorithm(p);
  Json r = base_report(c);
  auto support = inst.distribution.enumerate_support(c.caps.support_clients);
  bool has_full = false;
  for (const auto& w : support) has_full = has_full || w.clients == p.all_clients();
  if (!has_full) support.push_back({p.all_clients(), 0.0});
  double worst = 0.0;
  for (const auto& w : support) {
    const Solution sol = alg.solve(p, w.clients);
    Json rec;
    rec["clients"] = names_of(w.clients, p.clients());
    rec["algorithm"] = alg.name;
    rec["chosen"] = names_of(sol.chosen, p.elements());
    rec["cost"] = sol.cost;
    rec["opt"] = optional_oracle(r["notes"], "exact optimum", [&] { return Json(exact_opt(p, w.clients, 0, c.caps).cost); });
    if (rec["opt"].is_number()) {
      const double opt = rec["opt"].get<double>();
      const double ratio = opt > 0 ? sol.cost / opt : (sol.cost > 0 ? std::numeric_limits<double>::infinity() : 1.0);
      rec["ratio"] = num(ratio);
      worst = std::max(worst, ratio);
    }
    r["records"].push_back(rec);
  }
  r["summary"] = {{"algorithm", alg.name}, {"alpha", alg.alpha}, {"worst_ratio", num(worst)},
                  {"within_alpha", worst <= alg.alpha + 1e-9}};
  r["passed"] = worst <= alg.alpha + 1e-9;
  return r;
}

Json run_two_stage(const RunConfig& c, Strategy strategy) {
  const std::uint64_t seed = require_seed(c);
  const auto inst = load_two_stage(c);
  const auto& p = inst.problem;
  const auto& dist = inst.distribution;
  if (strategy == Strategy::IndBoost && !dist.is_independent())
    throw Error(ErrorKind::InvalidArgument, "run-indboost needs an independent distribution");
  const auto alg = default_algorithm(p);
  Json r = base_report(c);
  Json& notes = r["notes"];

  EvaluationOptions opts;
  opts.mode = c.mode == "mc" ? EvalMode::MonteCarlo : EvalMode::Exact;
  opts.runs = c.runs;
  opts.seed = derive_seed(seed, "evaluate");
  opts.support_cap = c.caps.support_clients;
  const PolicyEvaluation eval = evaluate_policy(p, alg, dist, strategy, opts);

  // One concrete policy, drawn from its own stream, with its recourse per
  // scenario.
  Rng rng = stream(seed, "policy");
  const auto marginals = dist.client_marginals();
  const TwoStagePolicy policy = strategy == Strategy::BoostAndSample ? boost_and_sample(p, alg, dist, rng)
                                                                     : ind_boost(p, alg, marginals, p.sigma(), rng);
  const Json sample_policy = optional_oracle(notes, "per-scenario records", [&] {
    Json recs = Json::array();
    for (const auto& w : dist.enumerate_support(c.caps.support_clients)) {
      const Solution rec = policy.recourse(w.clients);
      recs.push_back({{"scenario", names_of(w.clients, p.clients())},
                      {"probability", w.probability},
                      {"recourse", names_of(rec.chosen, p.elements())},
                      {"recourse_cost", p.sigma() * rec.cost},
                      {"total_cost", policy.realized_cost(p, w.clients)}});
    }
    return recs;
  });
  if (sample_policy.is_array()) r["records"] = sample_policy;

  const Json zstar = optional_oracle(notes, "two-stage optimum", [&] {
    return Json(exact_two_stage_opt(p, dist, c.caps).value);
  });
  const Json alpha = optional_oracle(notes, "empirical alpha", [&] { return num(empirical_alpha(alg, p, c.caps)); });
  const Json beta = optional_oracle(notes, "strictness", [&] {
    const auto xi = equal_split_shares(p, c.caps);
    const auto rep = strategy == Strategy::BoostAndSample ? measure_strictness(xi, alg, p, c.caps)
                                                          : measure_unistrictness(xi, alg, p, c.caps);
    return num(rep.beta_hat);
  });

  Json s;
  s["strategy"] = to_string(strategy);
  s["algorithm"] = alg.name;
  s["boosted"] = names_of(policy.boosted, p.clients());
  s["first_stage"] = names_of(policy.first_stage.chosen, p.elements());
  s["first_stage_cost"] = policy.first_stage.cost;
  s["expected_cost"] = eval.expected_cost;
  s["expected_first_stage"] = eval.first_stage_cost;
  s["expected_recourse"] = eval.recourse_cost;
  s["mode"] = to_string(eval.mode);
  if (eval.mode == EvalMode::MonteCarlo) s["ci99_halfwidth"] = eval.ci_halfwidth;
  s["evaluated_outcomes"] = eval.runs;
  s["z_star"] = zstar;
  s["alpha_empirical"] = alpha;
  s["beta_hat"] = beta;
  bool passed = true;
  if (zstar.is_number()) {
    const double z = zstar.get<double>();
    s["ratio"] = num(z > 0 ? eval.expected_cost / z : (eval.expected_cost > 0 ? INFINITY : 1.0));
    if (alpha.is_number() && beta.is_number()) {
      const double bound = alpha.get<double>() + beta.get<double>();
      s["bound"] = bound;
      // Exact evaluations are checked against (α + β̂) Z*; Monte Carlo ones
      // get their confidence half-width as slack.
      passed = eval.expected_cost - eval.ci_halfwidth <= bound * z + 1e-9;
      s["within_bound"] = passed;
    }
  }
  r["summary"] = s;
  r["passed"] = passed;
  return r;
}

// ---- run-saa --------------------------------------------------------------

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,value,step\n";
  for (const auto& t : trace) out << t.iteration << ',' << t.value << ',' << t.step << '\n';
  return out.str();
}

Json run_saa(const RunConfig& c, std::string* trace) {
  const std::uint64_t seed = require_seed(c);
  const Json j = read_json_file(c.instance_path);
  if (detect_instance_kind(j) != InstanceKind::StochasticLP)
    throw Error(ErrorKind::SchemaError, "run-saa expects a stochastic-LP instance");
  const auto inst = stochastic_lp_from_json(j);
  Json r = base_report(c);

  Rng rng = stream(seed, "saa-sample");
  const auto sampled = build_sample_average(inst, c.samples, rng);
  MinimizeOptions mo;
  mo.record_trace = true;
  const auto res = minimize(sampled, mo);
  if (trace) *trace = trace_csv(res.trace);
  const double h = h_exact(inst, res.x);
  const Json opt = optional_oracle(r["notes"], "deterministic equivalent", [&] {
    return Json(solve_deterministic_equivalent(inst).value);
  });

  Json s;
  s["x_hat"] = vec(res.x);
  s["sample_objective"] = res.value;
  s["h_x_hat"] = h;
  s["opt"] = opt;
  s["iterations"] = res.iterations;
  s["converged"] = res.converged;
  s["samples"] = c.samples;
  s["distinct_scenarios"] = sampled.scenarios().size();
  s["lambda"] = num(inst.lambda());
  if (opt.is_number()) {
    const double o = opt.get<double>();
    s["guarantee_rhs"] = (1 + c.gamma) * o + 6 * c.epsilon;
    s["guarantee_holds"] = h <= (1 + c.gamma) * o + 6 * c.epsilon + 1e-9;
  }
  if (std::isfinite(inst.lambda()) && inst.lipschitz_bound() > 0) {
    const auto plan = sample_size(inst.dimension(), inst.lambda(), inst.lipschitz_bound(), inst.radius(), c.epsilon,
                                  c.delta, c.gamma);
    s["theoretical_samples"] = plan.samples;
    s["levels"] = plan.levels;
    s["omega"] = plan.omega;
  }
  for (const auto& t : res.trace)
    if (t.iteration % 1000 == 0 || t.iteration == res.iterations)
      r["records"].push_back({{"iteration", t.iteration}, {"value", t.value}, {"step", t.step}});
  r["summary"] = s;
  r["passed"] = true;
  return r;
}

// ---- gap ------------------------------------------------------------------

GapInstance load_gap(const RunConfig& c) {
  const Json j = read_json_file(c.instance_path);
  if (detect_instance_kind(j) != InstanceKind::Gap) throw Error(ErrorKind::SchemaError, c.command + " expects a gap instance");
  return gap_from_json(j);
}

std::vector<std::string> item_names(const GapInstance& g) {
  if (!g.names.empty()) return g.names;
  std::vector<std::string> out;
  for (int i = 0; i < g.size(); ++i) out.push_back("i" + std::to_string(i + 1));
  return out;
}

Json run_gap(const RunConfig& c) {
  const auto g = load_gap(c);
  Json r = base_report(c);
  IndependentOptions io;
  if (c.mode == "mc") {
    io.monte_carlo = true;
    io.runs = c.runs;
    io.seed = derive_seed(require_seed(c), "independent");
  }
  const GapReport gr = correlation_gap(g, io);
  const auto names = item_names(g);
  if (g.size() <= 8) {
    for (Mask s = 0; s < gr.worst_distribution.size(); ++s)
      if (gr.worst_distribution[s] > 1e-12)
        r["records"].push_back({{"set", names_of(s, names)}, {"alpha", gr.worst_distribution[s]}});
  }
  Json s;
  s["worst_case"] = gr.worst_case;
  s["independent"] = gr.independent;
  if (!gr.independent_detail.exact) s["independent_ci99_halfwidth"] = gr.independent_detail.ci_halfwidth;
  s["kappa"] = gr.kappa;
  bool passed = true;
  try {
    const auto scheme = marginal_scheme(g.f);
    SchemeCheckOptions so;
    so.max_ground = std::max(so.max_ground, g.size());
    const SchemeCheck cert = check_scheme(scheme, g.f, so);
    s["scheme"] = {{"name", "marginal"}, {"eta_hat", num(cert.eta_hat)}, {"beta_hat", num(cert.beta_hat)},
                   {"cross_monotone", cert.cross_monotone}, {"certified", cert.certifies(1, 1)}};
    if (cert.certifies(1, 1)) {
      s["bound"] = gap_bound(1, 1);
      passed = gr.kappa <= gap_bound(1, 1) + 1e-6;
      s["satisfied"] = passed;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotSubmodular && e.kind() != ErrorKind::NotMonotone && e.kind() != ErrorKind::CapExceeded)
      throw;
    r["notes"].push_back(std::string("no certified scheme: ") + e.what());
  }
  r["summary"] = s;
  r["passed"] = passed;
  return r;
}

// ---- check ----------------------------------------------------------------

Json check_result(const std::string& name, const CheckReport& rep) {
  return {{"check", name}, {"passed", rep.passed}, {"violation", rep.violation}};
}

Json run_check(const RunConfig& c) {
  Json r = base_report(c);
  Json& recs = r["records"];
  const std::string& suite = c.suite;
  const Json j = read_json_file(c.instance_path);
  const InstanceKind kind = detect_instance_kind(j);

  if (kind == InstanceKind::TwoStage) {
    const auto inst = two_stage_from_json(j);
    const auto& p = inst.problem;
    const auto alg = default_algorithm(p);
    if (suite == "subadditivity") recs.push_back(check_result(suite, check_subadditive(p, c.caps)));
    else if (suite == "feasibility") recs.push_back(check_result(suite, check_feasibility_monotone(p, c.caps)));
    else if (suite == "fairness") recs.push_back(check_result(suite, check_fairness(equal_split_shares(p, c.caps), p, c.caps)));
    else if (suite == "strictness") {
      const auto xi = equal_split_shares(p, c.caps);
      const auto strict = measure_strictness(xi, alg, p, c.caps);
      const auto uni = measure_unistrictness(xi, alg, p, c.caps);
      recs.push_back({{"check", "strictness"}, {"passed", strict.finite()}, {"beta_hat", num(strict.beta_hat)},
                      {"pairs", strict.pairs_examined}});
      recs.push_back({{"check", "unistrictness"}, {"passed", uni.finite()}, {"beta_hat", num(uni.beta_hat)},
                      {"pairs", uni.pairs_examined}});
    } else if (suite == "approximation") {
      const double a = empirical_alpha(alg, p, c.caps);
      recs.push_back({{"check", suite}, {"passed", a <= alg.alpha + 1e-9}, {"alpha_empirical", num(a)}, {"alpha", alg.alpha}});
    } else {
      throw Error(ErrorKind::InvalidArgument,
                  "unknown suite '" + suite + "' for problem instances (subadditivity, feasibility, fairness, strictness, approximation)");
    }
  } else if (kind == InstanceKind::Gap) {
    const auto g = gap_from_json(j);
    if (suite == "submodularity") {
      recs.push_back(check_result("monotone", check_monotone(g.f)));
      recs.push_back(check_result("submodular", check_submodular(g.f)));
    } else if (suite == "scheme") {
      SchemeCheckOptions so;
      so.max_ground = std::max(so.max_ground, g.size());
      const auto cert = check_scheme(marginal_scheme(g.f), g.f, so);
      recs.push_back({{"check", suite}, {"passed", cert.certifies(1, 1)}, {"eta_hat", num(cert.eta_hat)},
                      {"beta_hat", num(cert.beta_hat)}, {"cross_monotone", cert.cross_monotone},
                      {"violation", cert.witness}});
    } else if (suite == "split") {
      const SplitMap map(std::vector<int>(g.size(), 2));
      const auto inv = check_split_invariants(g, map);
      recs.push_back({{"check", suite}, {"passed", inv.passed()}, {"worst_case", inv.worst_case},
                      {"worst_case_split", inv.worst_case_split}, {"independent", inv.independent},
                      {"independent_split", inv.independent_split}, {"violation", inv.violation}});
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "' for gap instances (submodularity, scheme, split)");
    }
  } else {
    const auto inst = stochastic_lp_from_json(j);
    if (suite != "subgradient")
      throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "' for stochastic-LP instances (subgradient)");
    Rng rng = stream(require_seed(c), "check-subgradient");
    const int m = inst.dimension();
    bool ok = true;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd x(m), y(m);
      for (int i = 0; i < m; ++i) {
        x(i) = rng.uniform();
        y(i) = rng.uniform();
      }
      x = inst.polytope().project(x);
      y = inst.polytope().project(y);
      const auto g = subgradient_at(inst, x);
      const double gap = h_exact(inst, y) - g.value - g.d.dot(y - x);
      worst = std::min(worst, gap);
      ok = ok && gap >= -1e-7 && g.d.norm() <= inst.lipschitz_bound() + 1e-9;
    }
    recs.push_back({{"check", suite}, {"passed", ok}, {"pairs", 100}, {"worst_slack", worst}});
  }
  bool passed = true;
  for (const auto& rec : recs) passed = passed && rec["passed"].get<bool>();
  r["passed"] = passed;
  return r;
}

std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return s;
}

void write_file(const std::string& path, const std::string& text, bool force) {
  if (std::filesystem::exists(path) && !force)
    throw Error(ErrorKind::InvalidArgument, path + " exists; pass --force to overwrite");
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SchemaError:
    case ErrorKind::InvalidArgument: return kExitUsage;
    case ErrorKind::CapExceeded: return kExitCap;
    default: return kExitSolver;
  }
}

bool is_stochastic(const std::string& command, const std::string& mode, const std::string& suite) {
  return command == "gen" || command == "run-boost" || command == "run-indboost" || command == "run-saa" ||
         (command == "gap" && mode == "mc") || (command == "check" && suite == "subgradient");
}

Json run(const RunConfig& c) {
  if (c.mode != "exact" && c.mode != "mc") throw Error(ErrorKind::InvalidArgument, "--mode must be exact or mc");
  if (c.format != "json" && c.format != "csv") throw Error(ErrorKind::InvalidArgument, "--format must be json or csv");
  if (is_stochastic(c.command, c.mode, c.suite)) require_seed(c);
  if (c.command != "gen" && c.instance_path.empty()) throw Error(ErrorKind::InvalidArgument, c.command + " needs an instance file");

  const auto start = std::chrono::steady_clock::now();
  Json report;
  if (c.command == "gen") return generate(c);
  if (c.command == "solve-det") report = solve_det(c);
  else if (c.command == "run-boost") report = run_two_stage(c, Strategy::BoostAndSample);
  else if (c.command == "run-indboost") report = run_two_stage(c, Strategy::IndBoost);
  else if (c.command == "run-saa") report = run_saa(c, nullptr);
  else if (c.command == "gap") report = run_gap(c);
  else if (c.command == "check") {
    if (c.suite.empty()) throw Error(ErrorKind::InvalidArgument, "check needs --suite");
    report = run_check(c);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown command '" + c.command + "'");
  }
  if (c.timing)
    report["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string records_csv(const Json& report) {
  const Json& recs = report.at("records");
  std::vector<std::string> keys;
  for (const auto& rec : recs)
    for (const auto& [k, v] : rec.items())
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  std::ostringstream out;
  for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
  out << '\n';
  for (const auto& rec : recs) {
    for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << (rec.contains(keys[i]) ? csv_cell(rec[keys[i]]) : "");
    out << '\n';
  }
  return out.str();
}

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (!c.output_path.empty() && std::filesystem::exists(c.output_path) && !c.force)
      throw Error(ErrorKind::InvalidArgument, c.output_path + " exists; pass --force to overwrite");
    if (!c.trace_path.empty() && std::filesystem::exists(c.trace_path) && !c.force)
      throw Error(ErrorKind::InvalidArgument, c.trace_path + " exists; pass --force to overwrite");

    Json report;
    std::string trace;
    if (c.command == "run-saa" && !c.trace_path.empty()) {
      // Same as run(), with the trace captured.
      RunConfig quiet = c;
      require_seed(c);
      const auto start = std::chrono::steady_clock::now();
      report = run_saa(quiet, &trace);
      if (c.timing)
        report["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } else {
      report = run(c);
    }
    const std::string text = (c.format == "csv" && c.command != "gen") ? records_csv(report) : report.dump(2) + "\n";
    if (c.output_path.empty()) out << text;
    else write_file(c.output_path, text, c.force);
    if (!trace.empty()) write_file(c.trace_path, trace, c.force);

    if (c.command != "gen" && !report.value("passed", true)) {
      err << "check failed\n";
      return kExitCheckFailed;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace stochopt
