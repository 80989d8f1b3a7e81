#pragma once

#include "medfem/config.hpp"
#include "medfem/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace medfem {

// Resolved problem: mesh plus operator spec built from the config strings.
struct ResolvedProblem {
  MeshPtr mesh;
  OperatorSpec spec;
};

DomainSpec parse_domain(const std::string& domain);

// Builds the coefficient/datum field named by a spec string on the mesh.
DiscreteField resolve_field_spec(const std::string& spec, const MeshPtr& mesh,
                                 const std::string& what);

ResolvedProblem resolve_problem(const RunConfig& config);

// Executes the configured experiment and assembles the report (not yet
// written to disk). Overrides replace the config's experiment/output dir.
RunReport execute(const RunConfig& config,
                  const std::optional<std::string>& experiment_override = std::nullopt);

// Full pipeline: parse, execute, emit. Returns the written file paths.
std::vector<std::string> run_config(const std::string& config_path,
                                    const std::optional<std::string>& experiment_override,
                                    const std::optional<std::string>& out_override);

}  // namespace medfem
