#pragma once

#include "medfem/solve.hpp"

#include <vector>

namespace medfem {

struct ContinuationSchedule {
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> k_levels{0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<double> n_levels{1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
  double stop_tol = 1e-4;  // W1p distance between successive truncates

  void check() const;
};

struct ContinuationStage {
  double epsilon = 0.0;
  WeakSolution solution;
};

struct RenormSolution {
  std::vector<ContinuationStage> stages;
  DiscreteField final_field;
  std::vector<double> k_levels;
  // truncation_distances[ki][j] = W1p distance of the k_levels[ki] truncates
  // between stage j and stage j+1
  std::vector<std::vector<double>> truncation_distances;
  bool converged = false;
};

// Solves the decreasing-epsilon family with warm starts, recording the W1p
// distances of truncates between consecutive stages. Converged when every
// monitored truncation level moved less than stop_tol in the last step.
RenormSolution epsilon_continuation(const Mesh& mesh, const OperatorSpec& spec,
                                    const ContinuationSchedule& schedule,
                                    const SolveOptions& options);

}  // namespace medfem
