#include "oracles.hpp"

#include "medfem/assembly.hpp"
#include "medfem/calculus.hpp"
#include "medfem/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace medfem::testing {

double median_breakpoint_oracle(const std::vector<double>& values,
                                const std::vector<double>& weights, double total_measure) {
  auto meas_above = [&](double t) {
    double m = 0.0;
    for (size_t i = 0; i < values.size(); ++i)
      if (values[i] > t) m += weights[i];
    return m;
  };
  const double half = 0.5 * total_measure;
  std::vector<double> breakpoints = values;
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  // G(t) = meas{u > t} is a right-continuous step function with jumps at the
  // breakpoints, so sup{ t : G(t) >= half } is the largest breakpoint a with
  // G(a - 0) >= half; probe just below each one.
  double best = breakpoints.front();
  for (double a : breakpoints) {
    const double gap = std::max(1e-9, 1e-9 * std::abs(a));
    if (meas_above(a - gap) >= half - 1e-12 * total_measure) best = a;
  }
  return best;
}

double lp_error(const DiscreteField& u, const std::function<double(const Vec2&)>& exact,
                double p, int quad_order) {
  const Mesh& mesh = u.mesh();
  const QuadratureRule& rule = quadrature_rule(mesh.dimension, quad_order);
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    double acc = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double* bary = rule.points[q].data();
      const double diff = u.value_at(e, bary) - exact(mesh.element_point(e, bary));
      acc += rule.weights[q] * std::pow(std::abs(diff), p);
    }
    total += mesh.element_measures[e] * acc;
  }
  return std::pow(total, 1.0 / p);
}

double w1p_error(const DiscreteField& u, const std::function<Vec2(const Vec2&)>& exact_grad,
                 double p, int quad_order) {
  const Mesh& mesh = u.mesh();
  const QuadratureRule& rule = quadrature_rule(mesh.dimension, quad_order);
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Vec2 g = u.gradient(e);
    double acc = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double* bary = rule.points[q].data();
      const double diff = (g - exact_grad(mesh.element_point(e, bary))).norm();
      acc += rule.weights[q] * std::pow(diff, p);
    }
    total += mesh.element_measures[e] * acc;
  }
  return std::pow(total, 1.0 / p);
}

std::vector<double> richardson_orders(const std::vector<double>& errors) {
  std::vector<double> orders;
  for (size_t i = 1; i < errors.size(); ++i)
    orders.push_back(std::log2(errors[i - 1] / errors[i]));
  return orders;
}

namespace {

// One mean-gauged Newton run from u0; converges to the point of the coupled
// solution manifold sharing u0's weighted mean.
DiscreteField coupled_newton_once(const Mesh& mesh, const RegularizedSpec& rspec,
                                  const SolveOptions& options, const DiscreteField& u0) {
  const int n = mesh.node_count();
  AssemblyOptions aopts;
  aopts.quad_order = options.quad_order;
  aopts.with_jacobian = false;

  auto coupled_residual = [&](const DiscreteField& u) {
    return assemble(mesh, rspec, u, u, aopts).residual;
  };

  DiscreteField u = u0;
  Eigen::VectorXd r = coupled_residual(u);
  const double scale = std::max(1.0, coupled_residual(DiscreteField(u0.mesh_ptr())).norm());
  const Eigen::VectorXd& w = u.lumped_node_measures();

  for (int it = 0; it < options.newton_max_iter; ++it) {
    if (r.norm() <= options.newton_tol * scale) break;

    Eigen::MatrixXd jac(n, n);
    for (int jcol = 0; jcol < n; ++jcol) {
      const double h = 1e-7 * std::max(1.0, std::abs(u[jcol]));
      Eigen::VectorXd vp = u.values(), vm = u.values();
      vp[jcol] += h;
      vm[jcol] -= h;
      jac.col(jcol) =
          (coupled_residual(u.with_values(vp)) - coupled_residual(u.with_values(vm))) / (2.0 * h);
    }

    Eigen::MatrixXd bordered = Eigen::MatrixXd::Zero(n + 1, n + 1);
    bordered.topLeftCorner(n, n) = jac;
    bordered.topRightCorner(n, 1) = w;
    bordered.bottomLeftCorner(1, n) = w.transpose();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs.head(n) = -r;
    const Eigen::VectorXd du = bordered.fullPivLu().solve(rhs).head(n);

    double step = 1.0;
    const double rnorm = r.norm();
    for (;;) {
      const Eigen::VectorXd trial = u.values() + step * du;
      const Eigen::VectorXd rt = coupled_residual(u.with_values(trial));
      if (rt.norm() <= (1.0 - 1e-4 * step) * rnorm) {
        u = u.with_values(trial);
        r = rt;
        break;
      }
      step *= 0.5;
      if (step < options.min_step)
        throw NonConvergenceError("coupled oracle stagnated", {rnorm});
    }
  }
  if (r.norm() > options.newton_tol * scale)
    throw NonConvergenceError("coupled oracle did not converge", {r.norm()});
  return u;
}

}  // namespace

DiscreteField coupled_newton_oracle(const Mesh& mesh, const RegularizedSpec& rspec,
                                    const SolveOptions& options) {
  // The coupled residual equations sum to zero identically, so the solution
  // set is a one-parameter manifold; alternate Newton (mean gauge) with
  // median shifts to land on its median-zero point.
  DiscreteField u = coupled_newton_once(mesh, rspec, options, DiscreteField(rspec.datum.mesh_ptr()));
  for (int round = 0; round < 50; ++round) {
    const double med = median(u);
    if (std::abs(med) <= 1e-11 * std::max(1.0, u.values().cwiseAbs().maxCoeff())) break;
    u = coupled_newton_once(mesh, rspec, options,
                            u.with_values(u.values().array() - med));
  }
  return u;
}

}  // namespace medfem::testing
