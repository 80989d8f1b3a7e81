#pragma once

#include "medfem/mesh.hpp"

#include <functional>
#include <vector>

namespace medfem {

// Quadrature points in barycentric coordinates with weights summing to 1:
// the integral over an element is element_measure * sum_i w_i f(x_i).
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int order = 0;  // polynomial exactness degree
};

// Smallest bundled rule exact for polynomials of the requested degree.
// 1D: Gauss-Legendre up to degree 9. 2D: centroid / 3-point / 6-point /
// 7-point rules up to degree 5.
const QuadratureRule& quadrature_rule(int dimension, int order);

inline constexpr int kDefaultQuadOrder = 4;

// Sum over elements of quadrature approximations of a pointwise integrand.
// Throws NumericError (with the element index) on non-finite values.
double integrate(const Mesh& mesh, const std::function<double(const Vec2&)>& integrand,
                 int order = kDefaultQuadOrder);

}  // namespace medfem
