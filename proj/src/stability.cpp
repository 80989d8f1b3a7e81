#include "medfem/stability.hpp"

#include "medfem/assumptions.hpp"
#include "medfem/calculus.hpp"
#include "medfem/errors.hpp"

#include <cmath>

namespace medfem {

namespace {

// (stab00): |phi_j(x,s)| <= c(x)(1+|s|^{p-1}) sampled on the standard grid.
void check_member_growth(const OperatorSpec& base, const StabilityMember& member,
                         const SampleGrid& grid) {
  const double p = base.p;
  for (const Vec2& x : grid.x_points) {
    const double c_here = base.c_field.value_at_point(x);
    for (double s : grid.s_levels) {
      const double bound = c_here * (1.0 + std::pow(std::abs(s), p - 1.0));
      if (member.phi(x, s).norm() > bound + 1e-12 * (1.0 + bound))
        throw ValidationError("stability member '" + member.label +
                              "' violates the shared growth bound");
    }
  }
}

}  // namespace

StabilityTable stability_experiment(const Mesh& mesh, const OperatorSpec& spec,
                                    const std::vector<StabilityMember>& members,
                                    const ContinuationSchedule& schedule,
                                    const SolveOptions& options) {
  schedule.check();
  if (members.empty()) throw InvalidParameterError("stability experiment needs members");

  const SampleGrid grid = SampleGrid::for_mesh(mesh);
  for (const auto& m : members) check_member_growth(spec, m, grid);

  const double eps = schedule.epsilons.back();
  const double p = spec.p;

  auto solve_with = [&](const DiscreteField& f, const ConvectionFn& phi) {
    OperatorSpec s = spec;
    s.f = f;
    s.phi = phi;
    return fixed_point_solve(mesh, regularize(s, eps), options);
  };

  const WeakSolution reference = solve_with(spec.f, spec.phi);

  StabilityTable table;
  table.k_levels = schedule.k_levels;
  for (const auto& m : members) {
    const WeakSolution sol = solve_with(m.f, m.phi);
    StabilityRow row;
    row.label = m.label;
    for (double k : schedule.k_levels) {
      const DiscreteField diff = truncate_field(sol.field, k)
                                     .with_values(truncate_field(sol.field, k).values() -
                                                  truncate_field(reference.field, k).values());
      row.truncate_distances.push_back(w1p_norm(diff, p, options.quad_order));
      row.distance = std::max(row.distance, row.truncate_distances.back());
    }
    const DiscreteField fdiff =
        sol.field.with_values(sol.field.values() - reference.field.values());
    row.field_lp_distance = lp_norm(fdiff, p, options.quad_order);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace medfem
