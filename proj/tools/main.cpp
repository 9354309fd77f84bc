#include <iostream>

#include <CLI11.hpp>

#include "stochopt/error.hpp"
#include "stochopt/harness.hpp"

using stochopt::RunConfig;

namespace {

void common(CLI::App* cmd, RunConfig& c, bool needs_instance = true) {
  if (needs_instance) cmd->add_option("instance", c.instance_path, "instance JSON file")->required();
  cmd->add_option("--seed", c.seed, "master RNG seed");
  cmd->add_option("-o,--output", c.output_path, "write the result here instead of stdout");
  cmd->add_flag("--force", c.force, "overwrite existing output files");
  cmd->add_flag("--no-timing{false}", c.timing, "omit wall-clock timing from the report");
}

void report_format(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--format", c.format, "json or csv (records only)")->check(CLI::IsMember({"json", "csv"}));
}

void evaluation(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--mode", c.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  cmd->add_option("--runs", c.runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
}

int run_cli(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Two-stage stochastic optimization toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(stochopt::kArtifactVersion));

  auto* gen = app.add_subcommand("gen", "generate a random instance");
  common(gen, c, false);
  gen->add_option("--kind", c.kind, "steiner, ufl, set_cover, vertex_cover, gap or slp")->required();
  gen->add_option("--size-a", c.size_a, "clients (steiner, set_cover), facilities (ufl), vertices (vertex_cover), items (gap), dimension (slp)");
  gen->add_option("--size-b", c.size_b, "edges (steiner, vertex_cover), clients (ufl), sets (set_cover), points (gap), scenarios (slp)");
  gen->add_option("--sigma", c.sigma, "inflation factor")->check(CLI::Range(1.0, 1e9));
  gen->add_option("--distribution", c.distribution, "explicit or independent");
  gen->add_option("--support", c.support, "scenarios in an explicit distribution")->check(CLI::PositiveNumber);

  auto* det = app.add_subcommand("solve-det", "run the deterministic algorithm on every scenario");
  common(det, c);
  report_format(det, c);

  for (const char* name : {"run-boost", "run-indboost"}) {
    auto* cmd = app.add_subcommand(name, std::string(name) == "run-boost" ? "Boost-and-Sample policy"
                                                                           : "independent-activation policy");
    common(cmd, c);
    report_format(cmd, c);
    evaluation(cmd, c);
  }

  auto* saa = app.add_subcommand("run-saa", "sample average approximation for a stochastic LP");
  common(saa, c);
  report_format(saa, c);
  saa->add_option("--samples", c.samples, "scenarios to sample")->check(CLI::PositiveNumber);
  saa->add_option("--trace", c.trace_path, "write the iteration trace as CSV");
  saa->add_option("--epsilon", c.epsilon)->check(CLI::PositiveNumber);
  saa->add_option("--delta", c.delta)->check(CLI::Range(0.0, 1.0));
  saa->add_option("--gamma", c.gamma)->check(CLI::PositiveNumber);

  auto* gap = app.add_subcommand("gap", "worst-case vs independent expectation");
  common(gap, c);
  report_format(gap, c);
  evaluation(gap, c);

  auto* check = app.add_subcommand("check", "run a property suite on an instance");
  common(check, c);
  report_format(check, c);
  check->add_option("--suite", c.suite,
                    "subadditivity, feasibility, fairness, strictness, approximation, submodularity, scheme, split, subgradient")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : stochopt::kExitUsage;
  }
  c.command = app.get_subcommands().front()->get_name();
  return stochopt::execute(c, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const stochopt::Error& e) {  // cap overrides are read before parsing
    std::cerr << "error: " << e.what() << '\n';
    return stochopt::exit_code_for(e.kind());
  }
}
