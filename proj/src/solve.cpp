#include "medfem/solve.hpp"

#include "medfem/calculus.hpp"
#include "medfem/errors.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <string>

namespace medfem {

void SolveOptions::check() const {
  if (!(newton_tol > 0.0) || !(picard_tol > 0.0))
    throw InvalidParameterError("solver tolerances must be > 0");
  if (!(relaxation > 0.0) || relaxation > 1.0)
    throw InvalidParameterError("relaxation weight must lie in (0, 1]");
  if (newton_max_iter < 1 || picard_max_iter < 1)
    throw InvalidParameterError("iteration limits must be >= 1");
}

namespace {

// Direct solve of J du = rhs with the constant null direction removed.
Eigen::VectorXd gauge_solve(const Eigen::SparseMatrix<double>& jac, const Eigen::VectorXd& rhs,
                            const Eigen::VectorXd& weights, GaugeMode gauge) {
  const int n = static_cast<int>(rhs.size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(jac.nonZeros() + 2 * n);
  Eigen::VectorXd b;

  if (gauge == GaugeMode::zero_mean_multiplier) {
    // bordered system [J w; w^T 0]
    for (int k = 0; k < jac.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(jac, k); it; ++it)
        triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int i = 0; i < n; ++i) {
      triplets.emplace_back(i, n, weights[i]);
      triplets.emplace_back(n, i, weights[i]);
    }
    Eigen::SparseMatrix<double> bordered(n + 1, n + 1);
    bordered.setFromTriplets(triplets.begin(), triplets.end());
    b = Eigen::VectorXd::Zero(n + 1);
    b.head(n) = rhs;

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(bordered);
    if (lu.info() != Eigen::Success)
      throw NumericError("gauge-fixed linear solve failed to factorize");
    const Eigen::VectorXd sol = lu.solve(b);
    return sol.head(n);
  }

  // pin node 0: identity row/column there
  for (int k = 0; k < jac.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(jac, k); it; ++it)
      if (it.row() != 0 && it.col() != 0)
        triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  triplets.emplace_back(0, 0, 1.0);
  Eigen::SparseMatrix<double> pinned(n, n);
  pinned.setFromTriplets(triplets.begin(), triplets.end());
  b = rhs;
  b[0] = 0.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(pinned);
  if (lu.info() != Eigen::Success)
    throw NumericError("pinned linear solve failed to factorize");
  return lu.solve(b);
}

Eigen::VectorXd plain_solve(const Eigen::SparseMatrix<double>& jac, const Eigen::VectorXd& rhs) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(jac);
  if (lu.info() != Eigen::Success) throw NumericError("linear solve failed to factorize");
  return lu.solve(rhs);
}

struct NewtonResult {
  DiscreteField field;
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residual_history;
};

// P1 stiffness (plus a lumped zero-order mass when requested): the linear
// model problem used to warm-start Newton for p != 2.
Eigen::SparseMatrix<double> linear_model_matrix(const Mesh& mesh, const RegularizedSpec& rspec,
                                                bool zero_order, int quad_order) {
  const int n = mesh.node_count();
  const QuadratureRule& rule = quadrature_rule(mesh.dimension, quad_order);
  const int npe = mesh.nodes_per_element();
  std::vector<Eigen::Triplet<double>> triplets;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto grads = mesh.element_gradients(e);
    const auto& el = mesh.elements[e];
    const double meas = mesh.element_measures[e];
    for (int i = 0; i < npe; ++i)
      for (int j = 0; j < npe; ++j) {
        double kij = meas * grads.col(i).dot(grads.col(j));
        if (zero_order) {
          double mass = 0.0;
          for (size_t q = 0; q < rule.points.size(); ++q) {
            const double* bary = rule.points[q].data();
            const Vec2 xq = mesh.element_point(e, bary);
            const double coeff =
                std::max(rspec.base.lambda_term->derivative(xq, 0.0), 1e-8) ;
            mass += rule.weights[q] * coeff * bary[i] * bary[j];
          }
          kij += meas * mass;
        }
        triplets.emplace_back(el[i], el[j], kij);
      }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

NewtonResult newton_solve(const Mesh& mesh, const RegularizedSpec& rspec, const DiscreteField& v,
                          const DiscreteField& u0, const SolveOptions& opts, bool zero_order) {
  AssemblyOptions aopts;
  aopts.quad_order = opts.quad_order;
  aopts.zero_order = zero_order;

  auto residual_only = [&](const DiscreteField& u) {
    AssemblyOptions ro = aopts;
    ro.with_jacobian = false;
    return assemble(mesh, rspec, v, u, ro).residual;
  };

  // residual scale from the zero state; keeps the stopping rule meaningful
  // for warm starts
  DiscreteField u = u0;
  const DiscreteField zero_field(u0.mesh_ptr());
  const double scale = std::max(1.0, residual_only(zero_field).norm());

  const bool cold = u.values().isZero();
  if (cold && rspec.base.p != 2.0) {
    // linear model warm start; one gauge-fixed solve
    const Eigen::VectorXd r0 = residual_only(zero_field);
    const Eigen::SparseMatrix<double> K =
        linear_model_matrix(mesh, rspec, zero_order, opts.quad_order);
    Eigen::VectorXd du = zero_order
                             ? plain_solve(K, (-r0).eval())
                             : gauge_solve(K, (-r0).eval(), u.lumped_node_measures(), opts.gauge);
    u = u.with_values(du);
  }

  AssembledSystem sys = assemble(mesh, rspec, v, u, aopts);
  double rnorm = sys.residual.norm();
  std::vector<double> history{rnorm};

  int it = 0;
  while (rnorm > opts.newton_tol * scale) {
    if (it >= opts.newton_max_iter)
      throw NonConvergenceError("Newton reached the iteration limit", history);

    const Eigen::VectorXd du =
        zero_order ? plain_solve(sys.jacobian, (-sys.residual).eval())
                   : gauge_solve(sys.jacobian, (-sys.residual).eval(), u.lumped_node_measures(),
                                 opts.gauge);

    // backtracking on the residual norm
    double step = 1.0;
    Eigen::VectorXd trial;
    double trial_norm;
    for (;;) {
      trial = u.values() + step * du;
      trial_norm = residual_only(u.with_values(trial)).norm();
      if (trial_norm <= (1.0 - 1e-4 * step) * rnorm) break;
      step *= opts.backtrack_factor;
      if (step < opts.min_step)
        throw NonConvergenceError("Newton stagnated (step below the minimum)", history);
    }

    u = u.with_values(std::move(trial));
    sys = assemble(mesh, rspec, v, u, aopts);
    rnorm = sys.residual.norm();
    history.push_back(rnorm);
    ++it;
  }

  return {std::move(u), it, rnorm, std::move(history)};
}

void check_datum_compatibility(const RegularizedSpec& rspec) {
  const double l1 = rspec.datum.lumped_l1_norm();
  if (std::abs(rspec.datum.integral()) > 1e-10 * std::max(1.0, l1))
    throw CompatibilityError("datum integral is nonzero; the pure Neumann problem is unsolvable");
}

}  // namespace

WeakSolution inner_solve(const Mesh& mesh, const RegularizedSpec& rspec, const DiscreteField& v,
                         const SolveOptions& options) {
  options.check();
  check_datum_compatibility(rspec);

  NewtonResult nr = newton_solve(mesh, rspec, v, v, options, /*zero_order=*/false);

  const double med = median(nr.field);
  WeakSolution sol;
  sol.field = nr.field.with_values(nr.field.values().array() - med);
  sol.iterations = 1;
  sol.inner_newton_counts = {nr.iterations};
  sol.final_residual = nr.final_residual;
  sol.gauge_shift = -med;
  sol.median = median(sol.field);
  sol.newton_residual_history = std::move(nr.residual_history);
  return sol;
}

namespace {

WeakSolution picard_loop(const Mesh& mesh, const RegularizedSpec& rspec,
                         const SolveOptions& options, const std::optional<DiscreteField>& warm,
                         bool zero_order) {
  options.check();
  if (zero_order) {
    if (!rspec.base.has_lambda())
      throw ValidationError("zero-order solve requires a lambda term");
  } else {
    check_datum_compatibility(rspec);
  }

  const MeshPtr mesh_ptr = rspec.datum.mesh_ptr();
  DiscreteField v = warm.value_or(DiscreteField(mesh_ptr));
  const double p = rspec.base.p;

  AssemblyOptions coupled;
  coupled.quad_order = options.quad_order;
  coupled.with_jacobian = false;
  coupled.zero_order = zero_order;
  const double coupled_scale =
      std::max(1.0, assemble(mesh, rspec, DiscreteField(mesh_ptr), DiscreteField(mesh_ptr), coupled)
                        .residual.norm());
  const double coupled_tol = 10.0 * options.newton_tol * coupled_scale;

  double theta = options.relaxation;
  std::vector<double> distances;
  std::vector<int> newton_counts;
  std::vector<double> last_newton_history;
  double last_residual = 0.0;

  for (int j = 1; j <= options.picard_max_iter; ++j) {
    NewtonResult nr = newton_solve(mesh, rspec, v, v, options, zero_order);
    newton_counts.push_back(nr.iterations);
    last_newton_history = std::move(nr.residual_history);
    last_residual = nr.final_residual;

    DiscreteField u = std::move(nr.field);
    double shift = 0.0;
    if (!zero_order) {
      shift = -median(u);
      u = u.with_values(u.values().array() + shift);
    }

    // a fixed point of Gamma solves the coupled system; check it directly
    const double coupled_norm = assemble(mesh, rspec, u, u, coupled).residual.norm();
    const bool coupled_ok = coupled_norm <= coupled_tol;

    Eigen::VectorXd mixed = (1.0 - theta) * v.values() + theta * u.values();
    const double dist = lp_norm(v.with_values(mixed - v.values()), p, options.quad_order);
    const double vnorm = lp_norm(v, p, options.quad_order);
    distances.push_back(dist);

    if (coupled_ok || dist <= options.picard_tol * std::max(1.0, vnorm)) {
      WeakSolution sol;
      sol.field = std::move(u);
      sol.iterations = j;
      sol.inner_newton_counts = std::move(newton_counts);
      sol.final_residual = coupled_ok ? coupled_norm : last_residual;
      sol.gauge_shift = shift;
      sol.median_enforced = !zero_order;
      sol.median = median(sol.field);
      sol.picard_distances = std::move(distances);
      sol.newton_residual_history = std::move(last_newton_history);
      return sol;
    }

    // two consecutive distance increases look like cycling: damp the mixing
    const size_t m = distances.size();
    if (m >= 3 && distances[m - 1] > distances[m - 2] && distances[m - 2] > distances[m - 3] &&
        theta > 1.0 / 64.0)
      theta *= 0.5;

    v = v.with_values(std::move(mixed));
  }

  throw NonConvergenceError("fixed-point iteration did not converge (theta = " +
                                std::to_string(theta) + ")",
                            distances);
}

}  // namespace

WeakSolution fixed_point_solve(const Mesh& mesh, const RegularizedSpec& rspec,
                               const SolveOptions& options,
                               const std::optional<DiscreteField>& warm_start) {
  return picard_loop(mesh, rspec, options, warm_start, /*zero_order=*/false);
}

WeakSolution zero_order_solve(const Mesh& mesh, const RegularizedSpec& rspec,
                              const SolveOptions& options,
                              const std::optional<DiscreteField>& warm_start) {
  return picard_loop(mesh, rspec, options, warm_start, /*zero_order=*/true);
}

}  // namespace medfem
