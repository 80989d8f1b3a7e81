#include "medfem/continuation.hpp"

#include "medfem/calculus.hpp"
#include "medfem/errors.hpp"

#include <string>

namespace medfem {

void ContinuationSchedule::check() const {
  if (epsilons.empty()) throw InvalidParameterError("continuation schedule has no epsilons");
  for (size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw InvalidParameterError("epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      throw InvalidParameterError("epsilons must be strictly decreasing");
  }
  auto check_levels = [](const std::vector<double>& v, const char* what) {
    if (v.empty()) throw InvalidParameterError(std::string(what) + " must be nonempty");
    for (size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.0)) throw InvalidParameterError(std::string(what) + " must be positive");
      if (i > 0 && !(v[i] > v[i - 1]))
        throw InvalidParameterError(std::string(what) + " must be strictly increasing");
    }
  };
  check_levels(k_levels, "k levels");
  check_levels(n_levels, "n levels");
  if (!(stop_tol > 0.0)) throw InvalidParameterError("stop tolerance must be > 0");
}

RenormSolution epsilon_continuation(const Mesh& mesh, const OperatorSpec& spec,
                                    const ContinuationSchedule& schedule,
                                    const SolveOptions& options) {
  schedule.check();
  spec.check_invariants();

  RenormSolution out;
  out.k_levels = schedule.k_levels;
  out.truncation_distances.assign(schedule.k_levels.size(), {});

  std::optional<DiscreteField> warm;
  const double p = spec.p;

  for (double eps : schedule.epsilons) {
    RegularizedSpec rspec = regularize(spec, eps);
    WeakSolution sol;
    try {
      sol = fixed_point_solve(mesh, rspec, options, warm);
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError("continuation stage eps = " + std::to_string(eps) +
                                    " failed: " + e.what(),
                                e.history());
    }

    if (!out.stages.empty()) {
      const DiscreteField& prev = out.stages.back().solution.field;
      for (size_t ki = 0; ki < schedule.k_levels.size(); ++ki) {
        const double k = schedule.k_levels[ki];
        const DiscreteField diff = truncate_field(sol.field, k)
                                       .with_values(truncate_field(sol.field, k).values() -
                                                    truncate_field(prev, k).values());
        out.truncation_distances[ki].push_back(w1p_norm(diff, p, options.quad_order));
      }
    }

    warm = sol.field;
    out.stages.push_back({eps, std::move(sol)});
  }

  out.final_field = out.stages.back().solution.field;

  out.converged = out.stages.size() >= 2;
  for (const auto& dists : out.truncation_distances)
    if (dists.empty() || dists.back() > schedule.stop_tol) out.converged = false;

  return out;
}

}  // namespace medfem
