#include "medfem/assembly.hpp"

#include "medfem/calculus.hpp"
#include "medfem/errors.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace medfem {

namespace {

// eps (delta^2+s^2)^((p-2)/2) s and its s-derivative
double zero_order_kernel(double p, double delta, double s) {
  if (s == 0.0 && delta == 0.0) return 0.0;
  return std::pow(delta * delta + s * s, 0.5 * (p - 2.0)) * s;
}

double zero_order_kernel_derivative(double p, double delta, double s) {
  const double n2 = delta * delta + s * s;
  if (n2 == 0.0) return p > 2.0 ? 0.0 : (p == 2.0 ? 1.0 : std::numeric_limits<double>::infinity());
  return std::pow(n2, 0.5 * (p - 2.0)) + (p - 2.0) * s * s * std::pow(n2, 0.5 * (p - 4.0));
}

}  // namespace

AssembledSystem assemble(const Mesh& mesh, const RegularizedSpec& rspec, const DiscreteField& v,
                         const DiscreteField& u, const AssemblyOptions& opts) {
  const int n = mesh.node_count();
  if (v.size() != n || u.size() != n || rspec.datum.size() != n)
    throw InvalidParameterError("assemble: fields must live on the solve mesh");
  if (opts.zero_order && !rspec.base.has_lambda())
    throw InvalidParameterError("assemble: zero-order assembly needs a lambda term");

  const QuadratureRule& rule = quadrature_rule(mesh.dimension, opts.quad_order);
  const int npe = mesh.nodes_per_element();
  const double p = rspec.base.p;
  const double cap = rspec.state_cap();

  AssembledSystem sys;
  sys.residual = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> triplets;
  if (opts.with_jacobian) triplets.reserve(mesh.element_count() * npe * npe);

  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto grads = mesh.element_gradients(e);
    const auto& el = mesh.elements[e];
    const Vec2 grad_u = u.gradient(e);
    const double meas = mesh.element_measures[e];

    Eigen::Vector3d local_r = Eigen::Vector3d::Zero();
    Eigen::Matrix3d local_j = Eigen::Matrix3d::Zero();

    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double* bary = rule.points[q].data();
      const double wq = rule.weights[q] * meas;
      const Vec2 xq = mesh.element_point(e, bary);
      const double vq = v.value_at(e, bary);
      const double fq = rspec.datum.value_at(e, bary);

      const Vec2 flux = rspec.a_eps(xq, vq, grad_u) + rspec.phi_eps(xq, vq);
      for (int i = 0; i < npe; ++i)
        local_r[i] += wq * (flux.dot(grads.col(i)) - fq * bary[i]);

      if (opts.with_jacobian) {
        const Mat2 dflux = rspec.a_eps_jac(xq, vq, grad_u);
        for (int i = 0; i < npe; ++i)
          for (int j = 0; j < npe; ++j)
            local_j(i, j) += wq * grads.col(i).dot(dflux * grads.col(j));
      }

      if (opts.zero_order) {
        const double uq = u.value_at(e, bary);
        const double ut = truncate(uq, cap);
        const double lam = rspec.base.lambda_term->value(xq, ut);
        if (lam * ut < -1e-12 * (1.0 + std::abs(lam * ut)))
          throw ValidationError("lambda sign condition violated at an assembly point");
        double zo = lam;
        if (rspec.epsilon > 0.0) zo += rspec.epsilon * zero_order_kernel(p, rspec.delta, uq);
        for (int i = 0; i < npe; ++i) local_r[i] += wq * zo * bary[i];
        if (opts.with_jacobian) {
          double dzo = std::abs(uq) <= cap ? rspec.base.lambda_term->derivative(xq, ut) : 0.0;
          if (rspec.epsilon > 0.0)
            dzo += rspec.epsilon * zero_order_kernel_derivative(p, rspec.delta, uq);
          for (int i = 0; i < npe; ++i)
            for (int j = 0; j < npe; ++j) local_j(i, j) += wq * dzo * bary[i] * bary[j];
        }
      }
    }

    for (int i = 0; i < npe; ++i) {
      if (!std::isfinite(local_r[i]))
        throw NumericError("non-finite residual contribution in element " + std::to_string(e), e);
      sys.residual[el[i]] += local_r[i];
      if (opts.with_jacobian)
        for (int j = 0; j < npe; ++j) {
          if (!std::isfinite(local_j(i, j)))
            throw NumericError("non-finite Jacobian contribution in element " + std::to_string(e),
                               e);
          triplets.emplace_back(el[i], el[j], local_j(i, j));
        }
    }
  }

  if (opts.with_jacobian) {
    sys.jacobian.resize(n, n);
    sys.jacobian.setFromTriplets(triplets.begin(), triplets.end());
  }
  return sys;
}

}  // namespace medfem
