#include "medfem/datum.hpp"

#include "medfem/calculus.hpp"
#include "medfem/errors.hpp"

#include <cmath>

namespace medfem {

namespace {

void mean_correct(Eigen::VectorXd& v, const Eigen::VectorXd& w, double total_measure) {
  v.array() -= w.dot(v) / total_measure;
}

}  // namespace

DiscreteField prepare_datum(const DiscreteField& f_raw, double epsilon, bool require_compat) {
  if (epsilon < 0.0) throw InvalidParameterError("prepare_datum requires epsilon >= 0");
  const Eigen::VectorXd& w = f_raw.lumped_node_measures();
  const double raw_l1 = f_raw.lumped_l1_norm();

  Eigen::VectorXd v = f_raw.values();
  if (epsilon > 0.0) {
    const double cap = 1.0 / epsilon;
    v = v.cwiseMax(-cap).cwiseMin(cap);
  }
  if (require_compat) {
    // one alternation: zero the mean, restore the L1 bound, re-zero the
    // round-off left by the scaling
    mean_correct(v, w, f_raw.mesh().total_measure);
    const double l1 = w.dot(v.cwiseAbs());
    if (l1 > raw_l1 && l1 > 0.0) v *= raw_l1 / l1;
    mean_correct(v, w, f_raw.mesh().total_measure);
  }
  return f_raw.with_values(std::move(v));
}

DiscreteField prepare_datum(const std::function<double(const Vec2&)>& f_raw, MeshPtr mesh,
                            double epsilon, bool require_compat) {
  return prepare_datum(DiscreteField::sample(std::move(mesh), f_raw), epsilon, require_compat);
}

double quartic_bump(const Vec2& x, const Vec2& x0, double width) {
  const double r2 = (x - x0).squaredNorm() / (width * width);
  const double t = 1.0 - r2;
  return t > 0.0 ? t * t : 0.0;
}

DiscreteField make_dipole(MeshPtr mesh, const Vec2& x0, const Vec2& x1, double width,
                          double mass) {
  if (!(width > 0.0)) throw InvalidParameterError("dipole width must be > 0");
  if (!(mass > 0.0)) throw InvalidParameterError("dipole mass must be > 0");
  DiscreteField pos =
      DiscreteField::sample(mesh, [&](const Vec2& x) { return quartic_bump(x, x0, width); });
  DiscreteField neg =
      DiscreteField::sample(mesh, [&](const Vec2& x) { return quartic_bump(x, x1, width); });
  const double mp = pos.integral();
  const double mn = neg.integral();
  if (!(mp > 0.0) || !(mn > 0.0))
    throw InvalidParameterError("dipole bump not resolved by the mesh (zero lumped mass)");
  // per-sign normalization makes the discrete masses exactly +-mass
  Eigen::VectorXd v = (mass / mp) * pos.values() - (mass / mn) * neg.values();
  return DiscreteField(std::move(mesh), std::move(v));
}

}  // namespace medfem
