#pragma once

#include "medfem/operator_spec.hpp"
#include "medfem/quadrature.hpp"

#include <Eigen/Sparse>

namespace medfem {

struct AssembledSystem {
  Eigen::VectorXd residual;
  Eigen::SparseMatrix<double> jacobian;  // empty when assembled without it
};

struct AssemblyOptions {
  int quad_order = kDefaultQuadOrder;
  bool with_jacobian = true;
  // include the zero-order terms eps |u|^{p-2} u + lambda(x, T_cap(u))
  bool zero_order = false;
};

// Galerkin residual and Jacobian of the frozen-coefficient problem: the
// s-slots of a and Phi are evaluated at v, the gradient slot at u, so the
// Jacobian is the exact derivative in u (gradient dependence only, plus the
// zero-order terms when enabled).
AssembledSystem assemble(const Mesh& mesh, const RegularizedSpec& rspec, const DiscreteField& v,
                         const DiscreteField& u, const AssemblyOptions& opts = {});

}  // namespace medfem
