#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "stochopt/correlation_gap.hpp"
#include "stochopt/distribution.hpp"
#include "stochopt/generators.hpp"
#include "stochopt/problem.hpp"
#include "stochopt/saa.hpp"
#include "stochopt/stochastic_lp.hpp"

namespace stochopt {

using Json = nlohmann::ordered_json;

/// A two-stage problem file: the instance plus the scenario law.
struct TwoStageInstance {
  ProblemInstance problem;
  ScenarioDistribution distribution;
};

/// Parse errors carry the line and column; schema errors carry the path of
/// the offending field, e.g. `problem.edges[2][0]`.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

TwoStageInstance two_stage_from_json(const Json& j);
Json to_json(const ProblemInstance& problem, const ScenarioDistribution& dist);

GapInstance gap_from_json(const Json& j);
Json gap_to_json(const CoverageSpec& spec, const std::vector<double>& marginals);

StochasticLPInstance stochastic_lp_from_json(const Json& j);
Json to_json(const StochasticLPInstance& inst);

/// Which of the three schemas a document follows, by its top-level keys.
enum class InstanceKind { TwoStage, Gap, StochasticLP };
InstanceKind detect_instance_kind(const Json& j);

}  // namespace stochopt
