#pragma once

#include "medfem/field.hpp"
#include "medfem/quadrature.hpp"

namespace medfem {

// Truncation at height k: clamp to [-k, k]. Throws for k < 0.
double truncate(double s, double k);

// Nodal clamping; keeps the truncate in the P1 space. The result differs
// from exact pointwise truncation inside elements crossing +-k by O(h).
DiscreteField truncate_field(const DiscreteField& u, double k);

// Median of a P1 field: weighted median of the nodal values with the lumped
// node measures, med = sup { t : meas{u > t} >= meas(Omega)/2 }.
double median(const DiscreteField& u);

// Element-wise quadrature of |u|^p, then the p-th root. Throws for p < 1.
double lp_norm(const DiscreteField& u, double p, int quad_order = kDefaultQuadOrder);

// (sum_e meas_e |grad u|^p)^(1/p); exact for P1 since gradients are
// element-wise constant.
double w1p_seminorm(const DiscreteField& u, double p);

// Full W^{1,p} norm (lp_norm^p + seminorm^p)^(1/p).
double w1p_norm(const DiscreteField& u, double p, int quad_order = kDefaultQuadOrder);

// meas{ |u| > t } for t >= 0. Exact piecewise-linear level-set slicing in 1D;
// quadrature of the indicator (default rule order) in 2D.
double distribution_measure(const DiscreteField& u, double t,
                            int quad_order = kDefaultQuadOrder);

// Psi_p(r) = integral_0^r (1+|s|)^{-p} ds in closed form. Odd, strictly
// increasing, bounded by 1/(p-1) for p > 1. Throws for p < 1.
double psi_transform(double r, double p);

DiscreteField psi_transform_field(const DiscreteField& u, double p);

// Piecewise-linear cutoff: 1 on [-n, n], 0 outside [-2n, 2n], linear between.
double cutoff_hat(double s, double n);

}  // namespace medfem
