#pragma once

#include "medfem/assembly.hpp"
#include "medfem/field.hpp"

#include <optional>
#include <vector>

namespace medfem {

// Gauge fixing for the constant null direction of the pure-Neumann system.
enum class GaugeMode { pin_node, zero_mean_multiplier };

struct SolveOptions {
  double newton_tol = 1e-10;  // relative residual threshold
  int newton_max_iter = 50;
  double backtrack_factor = 0.5;
  double min_step = 9.5367431640625e-7;  // 2^-20
  double picard_tol = 1e-8;              // relative Lp distance between iterates
  int picard_max_iter = 200;
  double relaxation = 1.0;  // theta in (0, 1], auto-halved on cycling
  GaugeMode gauge = GaugeMode::zero_mean_multiplier;
  int quad_order = kDefaultQuadOrder;

  void check() const;
};

struct WeakSolution {
  DiscreteField field;
  int iterations = 0;  // Picard count (1 for a plain inner solve)
  std::vector<int> inner_newton_counts;
  double final_residual = 0.0;
  double gauge_shift = 0.0;  // constant added to enforce median 0
  bool median_enforced = true;
  double median = 0.0;  // measured median of the returned field
  std::vector<double> picard_distances;
  std::vector<double> newton_residual_history;  // of the last inner solve
};

// Unique weak solution of the frozen problem (s-slots at v): damped Newton
// on the gauge-fixed system, then a constant shift to median 0.
WeakSolution inner_solve(const Mesh& mesh, const RegularizedSpec& rspec, const DiscreteField& v,
                         const SolveOptions& options);

// Picard iteration v <- (1-theta) v + theta Gamma(v) from v0 (default 0),
// stopping when the coupled residual vanishes or successive iterates are
// closer than picard_tol in Lp.
WeakSolution fixed_point_solve(const Mesh& mesh, const RegularizedSpec& rspec,
                               const SolveOptions& options,
                               const std::optional<DiscreteField>& warm_start = std::nullopt);

// Variant with the zero-order terms: no gauge fixing, no compatibility
// requirement, median reported but not enforced.
WeakSolution zero_order_solve(const Mesh& mesh, const RegularizedSpec& rspec,
                              const SolveOptions& options,
                              const std::optional<DiscreteField>& warm_start = std::nullopt);

}  // namespace medfem
