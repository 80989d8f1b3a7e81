#pragma once

#include "medfem/continuation.hpp"
#include "medfem/operator_spec.hpp"

#include <string>
#include <vector>

namespace medfem {

// One member of the perturbed family: a datum and a convection callable that
// must satisfy the shared growth bound.
struct StabilityMember {
  std::string label;
  DiscreteField f;
  ConvectionFn phi;
};

struct StabilityRow {
  std::string label;
  std::vector<double> truncate_distances;  // per monitored k, W1p to the reference
  double field_lp_distance = 0.0;
  double distance = 0.0;  // max over monitored k
};

struct StabilityTable {
  std::vector<double> k_levels;
  std::vector<StabilityRow> rows;
};

// Solves every member and the reference at the schedule's final epsilon and
// reports the truncate distances. Growth violations (against the shared c of
// the base spec) are validation errors naming the member.
StabilityTable stability_experiment(const Mesh& mesh, const OperatorSpec& spec,
                                    const std::vector<StabilityMember>& members,
                                    const ContinuationSchedule& schedule,
                                    const SolveOptions& options);

}  // namespace medfem
