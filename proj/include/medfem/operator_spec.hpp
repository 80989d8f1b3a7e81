#pragma once

#include "medfem/field.hpp"

#include <functional>
#include <optional>
#include <string>

namespace medfem {

// Callables of the operator triple. x is a point, s the scalar state,
// xi the gradient. All must be pure.
using FluxFn = std::function<Vec2(const Vec2& x, double s, const Vec2& xi)>;
using FluxJacFn = std::function<Mat2(const Vec2& x, double s, const Vec2& xi)>;
using ConvectionFn = std::function<Vec2(const Vec2& x, double s)>;
using ScalarFn = std::function<double(const Vec2& x, double s)>;
using ProfileFn = std::function<double(double s)>;

// Zero-order term lambda(x,s) with its coercivity profile g (|lambda| >= g,
// g -> +inf at +-inf) and the s-derivative used by Newton.
struct ZeroOrderTerm {
  ScalarFn value;
  ScalarFn derivative;
  ProfileFn coercivity_profile;
};

// The problem data (a, Phi, optional lambda, datum f) together with the
// structural constants the estimates rely on.
struct OperatorSpec {
  std::string name = "custom";
  double p = 2.0;
  double alpha = 1.0;      // coercivity constant of a
  double delta = 0.0;      // gradient smoothing used when the spec was built
  double q_exponent = 0.0; // summability class of c; metadata only

  FluxFn a;
  FluxJacFn a_jac;         // exact d a / d xi
  ConvectionFn phi;
  std::optional<ZeroOrderTerm> lambda_term;

  DiscreteField c_field;   // coefficient c(x) >= 0 in the Phi growth bound
  DiscreteField f;         // datum

  bool has_lambda() const { return lambda_term.has_value(); }

  // |integral of f| must vanish when no zero-order term carries the datum.
  void check_invariants() const;
};

// Step-1 regularization of a spec: s-slot truncated at 1/eps, an eps-scaled
// p-Laplacian kernel added to a, Phi clamped componentwise at 1/eps, and the
// datum clamped/mean-corrected. eps = 0 is the pass-through used by direct
// weak solves.
struct RegularizedSpec {
  OperatorSpec base;
  double epsilon = 0.0;
  double delta = 0.0;      // smoothing of the added kernel (copied from base)
  DiscreteField datum;     // prepared f_eps

  Vec2 a_eps(const Vec2& x, double s, const Vec2& xi) const;
  Mat2 a_eps_jac(const Vec2& x, double s, const Vec2& xi) const;
  Vec2 phi_eps(const Vec2& x, double s) const;

  // lambda's s-slot truncation height (infinite when eps = 0).
  double state_cap() const;
};

// Prototype operator: a(x,s,xi) = (delta^2+|xi|^2)^((p-2)/2) xi and
// Phi(x,s) = c(x) (delta^2+s^2)^((p-2)/2) s d, with d a fixed unit drift
// direction. alpha = 1 when delta = 0; for delta > 0 the computed lower
// coercivity constant over a reference gradient range is used.
OperatorSpec make_prototype(double p, DiscreteField c_field, DiscreteField f,
                            double delta = 0.0);

// Power zero-order term lambda(x,s) = |s|^(gamma-1) s, g(s) = |s|^gamma.
ZeroOrderTerm make_power_lambda(double gamma);

// Step-1 regularization; requires eps > 0. The datum is prepared with the
// compatibility correction unless the spec has a zero-order term.
RegularizedSpec regularize(const OperatorSpec& spec, double epsilon);

// Pass-through wrapper (epsilon = 0, datum untouched).
RegularizedSpec unregularized(const OperatorSpec& spec);

// Smoothed p-kernel (delta^2 + |xi|^2)^((p-2)/2) and its xi-Jacobian applied
// to xi; shared by the prototype and the regularization term.
double p_kernel(double p, double delta, const Vec2& xi);
Mat2 p_kernel_jacobian(double p, double delta, const Vec2& xi);

}  // namespace medfem
