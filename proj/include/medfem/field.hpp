#pragma once

#include "medfem/mesh.hpp"

#include <Eigen/Dense>

#include <functional>

namespace medfem {

// Continuous piecewise-linear scalar function given by nodal values, plus a
// lumped partition of meas(Omega) over the nodes (adjacent element measures
// split evenly among element nodes).
class DiscreteField {
public:
  DiscreteField() = default;
  DiscreteField(MeshPtr mesh, Eigen::VectorXd nodal_values);

  // Zero field on the mesh.
  explicit DiscreteField(MeshPtr mesh);

  // Nodal interpolation of a pointwise callable.
  static DiscreteField sample(MeshPtr mesh, const std::function<double(const Vec2&)>& fn);

  const Mesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& lumped_node_measures() const { return lumped_; }

  double operator[](int i) const { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }

  // Value at a barycentric point of element e.
  double value_at(int e, const double* barycentric) const;

  // P1 value at an arbitrary point (located on the mesh).
  double value_at_point(const Vec2& x) const;

  // Constant gradient on element e.
  Vec2 gradient(int e) const;

  // Exact integral of the P1 function (equals the lumped inner product with 1).
  double integral() const;

  // Lumped discrete L1 norm, sum_i w_i |u_i|.
  double lumped_l1_norm() const;

  // Throws on size mismatch or non-finite values.
  void check_invariants() const;

  DiscreteField with_values(Eigen::VectorXd v) const { return DiscreteField(mesh_, std::move(v)); }

private:
  MeshPtr mesh_;
  Eigen::VectorXd values_;
  Eigen::VectorXd lumped_;
};

// Largest nodal value spread within any single element: the natural
// resolution of nodal quantities (medians, shifts) on the field.
double nodal_gap(const DiscreteField& u);

}  // namespace medfem
