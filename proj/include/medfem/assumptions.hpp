#pragma once

#include "medfem/operator_spec.hpp"

#include <string>
#include <vector>

namespace medfem {

// Sample grid for the structural checks: x points, s levels, gradient
// directions and magnitudes. Defaults cover the desk-scale regression range.
struct SampleGrid {
  std::vector<Vec2> x_points;
  std::vector<double> s_levels{0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0, 10.0, -10.0};
  std::vector<Vec2> xi_directions{Vec2(1, 0), Vec2(0, 1), Vec2(1, 1).normalized(),
                                  Vec2(-1, 0.5).normalized()};
  std::vector<double> xi_magnitudes{1e-3, 0.1, 1.0, 10.0};

  static SampleGrid for_mesh(const Mesh& mesh, int max_x_points = 32);
};

struct SampleWitness {
  Vec2 x = Vec2::Zero();
  double s = 0.0;
  Vec2 xi = Vec2::Zero();
  Vec2 eta = Vec2::Zero();
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AssumptionCheck {
  std::string name;
  bool applicable = true;
  bool passed = false;
  double margin = 0.0;  // minimum of lhs - rhs over the grid (sign convention per check)
  SampleWitness worst;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_passed() const;
  const AssumptionCheck* find(const std::string& name) const;
};

// Checks the structural inequalities at every grid tuple: coercivity,
// strict monotonicity (on grid pairs), growth of a, growth of Phi, and the
// zero-order sign/bound/coercivity conditions when a lambda term is present.
// Failures are report entries, never exceptions.
AssumptionReport validate_assumptions(const OperatorSpec& spec, const SampleGrid& grid);

}  // namespace medfem
