#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "stochopt/json_io.hpp"
#include "stochopt/oracles.hpp"

namespace stochopt {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,  // bad flags, schema errors, refusing to overwrite
  kExitCap = 3,
  kExitSolver = 4,  // infeasible, unbounded, numerical and other module errors
};

int exit_code_for(ErrorKind kind);

struct RunConfig {
  std::string command;  // gen | solve-det | run-boost | run-indboost | run-saa | gap | check
  std::string instance_path;
  std::optional<std::uint64_t> seed;
  std::string output_path;  // empty: standard output
  bool force = false;
  std::string format = "json";  // json | csv
  std::string trace_path;       // run-saa iteration trace (CSV)
  bool timing = true;

  std::string mode = "exact";  // exact | mc
  long runs = 10'000;
  long samples = 2'000;
  std::string suite;

  // gen
  std::string kind;
  int size_a = 3;
  int size_b = 4;
  double sigma = 2.0;
  std::string distribution = "explicit";
  int support = 3;

  // run-saa guarantee parameters
  double epsilon = 0.05;
  double delta = 0.1;
  double gamma = 0.1;

  Caps caps = Caps::from_env();
};

bool is_stochastic(const std::string& command, const std::string& mode, const std::string& suite);

/// Runs one command and returns its report (or, for gen, the instance).
/// Throws Error on usage, schema and module failures.
Json run(const RunConfig& config);

/// Renders the records of a report as CSV, one row per record.
std::string records_csv(const Json& report);

/// run() plus file handling and error-to-exit-code mapping; diagnostics go
/// to `err`, the rendered result to `out` or to config.output_path.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace stochopt
