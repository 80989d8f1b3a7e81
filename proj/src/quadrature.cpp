#include "medfem/quadrature.hpp"

#include "medfem/errors.hpp"

#include <cmath>
#include <string>

namespace medfem {

namespace {

QuadratureRule gauss_interval(int points) {
  // Nodes/weights on [-1,1], mapped to barycentric (1-t, t) on [0,1].
  QuadratureRule r;
  std::vector<double> x, w;
  switch (points) {
    case 1:
      x = {0.0};
      w = {2.0};
      r.order = 1;
      break;
    case 2:
      x = {-0.57735026918962576451, 0.57735026918962576451};
      w = {1.0, 1.0};
      r.order = 3;
      break;
    case 3:
      x = {-0.77459666924148337704, 0.0, 0.77459666924148337704};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      r.order = 5;
      break;
    case 4:
      x = {-0.86113631159405257522, -0.33998104358485626480, 0.33998104358485626480,
           0.86113631159405257522};
      w = {0.34785484513745385737, 0.65214515486254614263, 0.65214515486254614263,
           0.34785484513745385737};
      r.order = 7;
      break;
    case 5:
      x = {-0.90617984593866399280, -0.53846931010568309104, 0.0, 0.53846931010568309104,
           0.90617984593866399280};
      w = {0.23692688505618908751, 0.47862867049936646804, 0.56888888888888888889,
           0.47862867049936646804, 0.23692688505618908751};
      r.order = 9;
      break;
    default:
      throw InvalidParameterError("unsupported 1D quadrature point count");
  }
  for (size_t i = 0; i < x.size(); ++i) {
    const double t = 0.5 * (x[i] + 1.0);
    r.points.push_back({1.0 - t, t, 0.0});
    r.weights.push_back(0.5 * w[i]);
  }
  return r;
}

QuadratureRule triangle_rule(int order) {
  QuadratureRule r;
  auto push3 = [&r](double a, double b, double w) {
    r.points.push_back({a, b, b});
    r.points.push_back({b, a, b});
    r.points.push_back({b, b, a});
    r.weights.insert(r.weights.end(), 3, w);
  };
  if (order <= 1) {
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(1.0);
    r.order = 1;
  } else if (order == 2) {
    push3(0.0, 0.5, 1.0 / 3.0);  // edge midpoints
    r.order = 2;
  } else if (order <= 4) {
    push3(0.10810301816807022736, 0.44594849091596488632, 0.22338158967801146570);
    push3(0.81684757298045851308, 0.09157621350977074346, 0.10995174365532186764);
    r.order = 4;
  } else if (order == 5) {
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(0.225);
    push3(0.05971587178976982045, 0.47014206410511508977, 0.13239415278850618074);
    push3(0.79742698535308732240, 0.10128650732345633880, 0.12593918054482715260);
    r.order = 5;
  } else {
    throw InvalidParameterError("2D quadrature order > 5 is not supported");
  }
  return r;
}

}  // namespace

const QuadratureRule& quadrature_rule(int dimension, int order) {
  if (order < 1) throw InvalidParameterError("quadrature order must be >= 1");
  if (dimension == 1) {
    static const QuadratureRule g1 = gauss_interval(1);
    static const QuadratureRule g2 = gauss_interval(2);
    static const QuadratureRule g3 = gauss_interval(3);
    static const QuadratureRule g4 = gauss_interval(4);
    static const QuadratureRule g5 = gauss_interval(5);
    if (order <= 1) return g1;
    if (order <= 3) return g2;
    if (order <= 5) return g3;
    if (order <= 7) return g4;
    if (order <= 9) return g5;
    throw InvalidParameterError("1D quadrature order > 9 is not supported");
  }
  if (dimension == 2) {
    static const QuadratureRule t1 = triangle_rule(1);
    static const QuadratureRule t2 = triangle_rule(2);
    static const QuadratureRule t4 = triangle_rule(4);
    static const QuadratureRule t5 = triangle_rule(5);
    if (order <= 1) return t1;
    if (order == 2) return t2;
    if (order <= 4) return t4;
    if (order == 5) return t5;
    throw InvalidParameterError("2D quadrature order > 5 is not supported");
  }
  throw InvalidParameterError("quadrature dimension must be 1 or 2");
}

double integrate(const Mesh& mesh, const std::function<double(const Vec2&)>& integrand,
                 int order) {
  const QuadratureRule& rule = quadrature_rule(mesh.dimension, order);
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    double acc = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double v = integrand(mesh.element_point(e, rule.points[q].data()));
      if (!std::isfinite(v))
        throw NumericError("non-finite integrand value in element " + std::to_string(e), e);
      acc += rule.weights[q] * v;
    }
    total += mesh.element_measures[e] * acc;
  }
  return total;
}

}  // namespace medfem
