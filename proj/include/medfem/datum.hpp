#pragma once

#include "medfem/field.hpp"

namespace medfem {

// Nodal projection of the raw datum, clamped at 1/eps, then (when the
// compatibility condition is required) mean-corrected so the integral
// vanishes and rescaled so the lumped L1 norm does not exceed the raw one.
// eps = 0 disables the clamp.
DiscreteField prepare_datum(const DiscreteField& f_raw, double epsilon, bool require_compat);

DiscreteField prepare_datum(const std::function<double(const Vec2&)>& f_raw, MeshPtr mesh,
                            double epsilon, bool require_compat);

// Quartic bump max(0, 1 - (r/width)^2)^2 centered at x0.
double quartic_bump(const Vec2& x, const Vec2& x0, double width);

// Dipole datum: bump at x0 minus bump at x1, each side discretely normalized
// so its lumped mass is exactly +-mass. The result integrates to zero and has
// lumped L1 norm 2*mass.
DiscreteField make_dipole(MeshPtr mesh, const Vec2& x0, const Vec2& x1, double width,
                          double mass);

}  // namespace medfem
