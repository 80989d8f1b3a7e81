#include "medfem/calculus.hpp"

#include "medfem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace medfem {

double truncate(double s, double k) {
  if (k < 0.0) throw InvalidParameterError("truncation height must be >= 0");
  return std::min(k, std::max(s, -k));
}

DiscreteField truncate_field(const DiscreteField& u, double k) {
  if (k < 0.0) throw InvalidParameterError("truncation height must be >= 0");
  Eigen::VectorXd v = u.values().cwiseMax(-k).cwiseMin(k);
  return u.with_values(std::move(v));
}

double median(const DiscreteField& u) {
  const Eigen::VectorXd& vals = u.values();
  const Eigen::VectorXd& w = u.lumped_node_measures();
  const int n = static_cast<int>(vals.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] > vals[b]; });

  // med = sup { t : meas{u > t} >= half }. Scanning values downward, the
  // supremum is the largest value a with meas{u >= a} >= half.
  const double half = 0.5 * u.mesh().total_measure;
  const double tol = 1e-12 * u.mesh().total_measure;
  double tail = 0.0;
  int i = 0;
  while (i < n) {
    const double a = vals[idx[i]];
    int j = i;
    while (j < n && vals[idx[j]] == a) tail += w[idx[j++]];
    if (tail >= half - tol) return a;
    i = j;
  }
  return vals[idx[n - 1]];
}

double lp_norm(const DiscreteField& u, double p, int quad_order) {
  if (p < 1.0) throw InvalidParameterError("Lp norm requires p >= 1");
  const QuadratureRule& rule = quadrature_rule(u.mesh().dimension, quad_order);
  double total = 0.0;
  for (int e = 0; e < u.mesh().element_count(); ++e) {
    double acc = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q)
      acc += rule.weights[q] * std::pow(std::abs(u.value_at(e, rule.points[q].data())), p);
    total += u.mesh().element_measures[e] * acc;
  }
  return std::pow(total, 1.0 / p);
}

double w1p_seminorm(const DiscreteField& u, double p) {
  if (p < 1.0) throw InvalidParameterError("W1p seminorm requires p >= 1");
  double total = 0.0;
  for (int e = 0; e < u.mesh().element_count(); ++e)
    total += u.mesh().element_measures[e] * std::pow(u.gradient(e).norm(), p);
  return std::pow(total, 1.0 / p);
}

double w1p_norm(const DiscreteField& u, double p, int quad_order) {
  const double a = lp_norm(u, p, quad_order);
  const double b = w1p_seminorm(u, p);
  return std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
}

namespace {

// Fraction of [0,1] where the linear function v0 + t (v1 - v0) exceeds c.
double linear_excess_fraction(double v0, double v1, double c) {
  const bool e0 = v0 > c, e1 = v1 > c;
  if (e0 && e1) return 1.0;
  if (!e0 && !e1) return 0.0;
  const double t = (c - v0) / (v1 - v0);
  return e0 ? t : 1.0 - t;
}

}  // namespace

double distribution_measure(const DiscreteField& u, double t, int quad_order) {
  if (t < 0.0) throw InvalidParameterError("distribution level must be >= 0");
  const Mesh& mesh = u.mesh();
  double total = 0.0;
  if (mesh.dimension == 1) {
    for (int e = 0; e < mesh.element_count(); ++e) {
      const double v0 = u[mesh.elements[e][0]];
      const double v1 = u[mesh.elements[e][1]];
      const double frac =
          linear_excess_fraction(v0, v1, t) + linear_excess_fraction(-v0, -v1, t);
      total += mesh.element_measures[e] * frac;
    }
  } else {
    const QuadratureRule& rule = quadrature_rule(2, std::max(2, quad_order));
    for (int e = 0; e < mesh.element_count(); ++e) {
      double acc = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q)
        if (std::abs(u.value_at(e, rule.points[q].data())) > t) acc += rule.weights[q];
      total += mesh.element_measures[e] * acc;
    }
  }
  return total;
}

double psi_transform(double r, double p) {
  if (p < 1.0) throw InvalidParameterError("psi transform requires p >= 1");
  const double sign = (r > 0.0) - (r < 0.0);
  if (p == 1.0) return sign * std::log1p(std::abs(r));
  return sign * (1.0 - std::pow(1.0 + std::abs(r), 1.0 - p)) / (p - 1.0);
}

DiscreteField psi_transform_field(const DiscreteField& u, double p) {
  Eigen::VectorXd v(u.size());
  for (int i = 0; i < u.size(); ++i) v[i] = psi_transform(u[i], p);
  return u.with_values(std::move(v));
}

double cutoff_hat(double s, double n) {
  if (!(n > 0.0)) throw InvalidParameterError("cutoff level must be > 0");
  const double a = std::abs(s);
  if (a <= n) return 1.0;
  if (a > 2.0 * n) return 0.0;
  return (2.0 * n - a) / n;
}

}  // namespace medfem
