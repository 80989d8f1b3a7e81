#pragma once

#include <Eigen/Dense>

#include <array>
#include <memory>
#include <variant>
#include <vector>

namespace medfem {

// Points and gradients live in R^2 for both supported dimensions; 1D uses
// component 0 and keeps component 1 at zero.
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Simplicial mesh of a connected domain: an interval partition (dimension 1)
// or a structured triangulation of the unit square (dimension 2).
// Element node tuples store -1 in the unused slot for intervals.
struct Mesh {
  int dimension = 1;
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> elements;
  std::vector<double> element_measures;
  double total_measure = 0.0;
  // > 0 when the mesh is the canonical structured unit-square triangulation;
  // enables O(1) point location.
  int structured_resolution = 0;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
  int nodes_per_element() const { return dimension + 1; }

  // Constant P1 basis gradients on one element, one column per local node.
  Eigen::Matrix<double, 2, 3> element_gradients(int e) const;

  // Physical coordinates of a barycentric point inside element e.
  Vec2 element_point(int e, const double* barycentric) const;

  // Element containing x (clamped to the domain) and its barycentric
  // coordinates there. O(log n) on the structured meshes this project builds,
  // linear scan otherwise.
  int locate(const Vec2& x, double barycentric[3]) const;

  // Largest element diameter (mesh size h).
  double max_element_diameter() const;

  // Throws if measures, indices, orientation, or connectivity are broken.
  void check_invariants() const;
};

struct IntervalDomain {
  double a = 0.0;
  double b = 1.0;
};
struct UnitSquareDomain {};
using DomainSpec = std::variant<IntervalDomain, UnitSquareDomain>;

// Uniform mesh of the requested domain. Intervals get `resolution` elements;
// the unit square gets a structured grid split along one diagonal,
// 2*resolution^2 triangles.
Mesh build_mesh(const DomainSpec& domain, int resolution);

using MeshPtr = std::shared_ptr<const Mesh>;

MeshPtr build_mesh_shared(const DomainSpec& domain, int resolution);

}  // namespace medfem
