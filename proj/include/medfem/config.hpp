#pragma once

#include "medfem/continuation.hpp"
#include "medfem/solve.hpp"

#include <string>
#include <vector>

namespace medfem {

// Configuration mirrors the file format: line-oriented key/value pairs in
// sections, decimal floats only. Field/coefficient specs stay as normalized
// token strings until a mesh exists to resolve them on.
struct ProblemConfig {
  std::string op = "prototype";  // prototype | linear-diffusion
  double p = 2.0;
  double delta = 1e-6;
  std::string c_spec = "zero";
  std::string f_spec = "zero";
  std::string lambda_spec;  // empty = absent; "power <gamma>"
  bool allow_lambda = false;

  bool operator==(const ProblemConfig&) const = default;
};

struct MeshConfig {
  std::string domain = "interval 0 1";  // interval <a> <b> | unit_square
  int resolution = 16;

  bool operator==(const MeshConfig&) const = default;
};

struct SolverConfig {
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  double picard_tol = 1e-8;
  int picard_max_iter = 200;
  double relaxation = 1.0;
  std::string gauge = "zero_mean_multiplier";  // or pin_node
  int quad_order = kDefaultQuadOrder;
  double epsilon = 0.0;  // regularization for solve / zero_order runs

  bool operator==(const SolverConfig&) const = default;
  SolveOptions to_options() const;
};

struct ContinuationConfig {
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> k_levels{0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<double> n_levels{1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
  double stop_tol = 1e-4;

  bool operator==(const ContinuationConfig&) const = default;
  ContinuationSchedule to_schedule() const;
};

struct StabilityConfig {
  std::vector<int> j_values{1, 2, 4, 8};
  std::string g_spec = "zero";  // datum perturbation, weighted 1/j
  std::string phi_mode = "none";  // none | scale (phi_j = (1 - 1/j) phi)

  bool operator==(const StabilityConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats{"json", "csv"};

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  ProblemConfig problem;
  MeshConfig mesh;
  SolverConfig solver;
  ContinuationConfig continuation;
  StabilityConfig stability;
  std::string experiment = "solve";
  OutputConfig output;

  bool operator==(const RunConfig&) const = default;

  // Enumerations, referenced files, and cross-field rules; throws ConfigError.
  void validate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical form: fixed section and key order. parse(emit(c)) == c.
std::string emit_config(const RunConfig& config);

// FNV-1a 64-bit of the canonical form, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace medfem
