#include "medfem/field.hpp"

#include "medfem/errors.hpp"

#include <cmath>
#include <string>

namespace medfem {

namespace {

Eigen::VectorXd lumped_measures(const Mesh& mesh) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.node_count());
  const int npe = mesh.nodes_per_element();
  for (int e = 0; e < mesh.element_count(); ++e) {
    const double share = mesh.element_measures[e] / npe;
    for (int i = 0; i < npe; ++i) w[mesh.elements[e][i]] += share;
  }
  return w;
}

}  // namespace

DiscreteField::DiscreteField(MeshPtr mesh, Eigen::VectorXd nodal_values)
    : mesh_(std::move(mesh)), values_(std::move(nodal_values)), lumped_(lumped_measures(*mesh_)) {
  check_invariants();
}

DiscreteField::DiscreteField(MeshPtr mesh)
    : DiscreteField(mesh, Eigen::VectorXd::Zero(mesh->node_count())) {}

DiscreteField DiscreteField::sample(MeshPtr mesh,
                                    const std::function<double(const Vec2&)>& fn) {
  Eigen::VectorXd v(mesh->node_count());
  for (int i = 0; i < mesh->node_count(); ++i) v[i] = fn(mesh->nodes[i]);
  return DiscreteField(std::move(mesh), std::move(v));
}

double DiscreteField::value_at(int e, const double* barycentric) const {
  const auto& el = mesh_->elements[e];
  double v = 0.0;
  for (int i = 0; i < mesh_->nodes_per_element(); ++i) v += barycentric[i] * values_[el[i]];
  return v;
}

double DiscreteField::value_at_point(const Vec2& x) const {
  double bary[3];
  const int e = mesh_->locate(x, bary);
  return value_at(e, bary);
}

Vec2 DiscreteField::gradient(int e) const {
  const auto grads = mesh_->element_gradients(e);
  const auto& el = mesh_->elements[e];
  Vec2 g = Vec2::Zero();
  for (int i = 0; i < mesh_->nodes_per_element(); ++i) g += values_[el[i]] * grads.col(i);
  return g;
}

double DiscreteField::integral() const { return lumped_.dot(values_); }

double DiscreteField::lumped_l1_norm() const { return lumped_.dot(values_.cwiseAbs()); }

void DiscreteField::check_invariants() const {
  if (!mesh_) throw InvalidParameterError("field has no mesh");
  if (values_.size() != mesh_->node_count())
    throw InvalidParameterError("nodal value count does not match mesh");
  for (int i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw NumericError("non-finite nodal value at node " + std::to_string(i));
  const double wsum = lumped_.sum();
  if (std::abs(wsum - mesh_->total_measure) > 1e-12 * std::max(1.0, mesh_->total_measure))
    throw InvalidParameterError("lumped node measures do not sum to the domain measure");
}

double nodal_gap(const DiscreteField& u) {
  const Mesh& mesh = u.mesh();
  double gap = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& el = mesh.elements[e];
    const int npe = mesh.nodes_per_element();
    for (int i = 0; i < npe; ++i)
      for (int j = i + 1; j < npe; ++j)
        gap = std::max(gap, std::abs(u[el[i]] - u[el[j]]));
  }
  return gap;
}

}  // namespace medfem
