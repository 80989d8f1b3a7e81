#pragma once

#include "medfem/config.hpp"
#include "medfem/estimates.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace medfem {

// A finished run: the structured document, curve data for CSV emission, and
// the wall-clock sidecar text (kept out of the deterministic document).
struct RunReport {
  std::string experiment;
  std::string hash;  // config hash; file names derive from it
  nlohmann::ordered_json body;
  std::vector<Curve> curves;
  std::string timings_text;
  std::string solution_snapshot;  // optional snapshot payload

  std::string base_name() const { return experiment + "-" + hash; }
};

// Writes the JSON document (always), CSV curve files when curve data exists
// and csv is among the formats, the snapshot, and the timings sidecar.
// Returns the written paths, document first. Throws NumericError if the
// document contains non-finite numbers.
std::vector<std::string> emit_report(const RunReport& report, const OutputConfig& output);

nlohmann::ordered_json curve_to_json(const Curve& curve);

}  // namespace medfem
