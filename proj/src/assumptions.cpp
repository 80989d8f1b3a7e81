#include "medfem/assumptions.hpp"

#include "medfem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace medfem {

SampleGrid SampleGrid::for_mesh(const Mesh& mesh, int max_x_points) {
  SampleGrid g;
  const int n = mesh.node_count();
  const int stride = std::max(1, n / max_x_points);
  for (int i = 0; i < n; i += stride) g.x_points.push_back(mesh.nodes[i]);
  return g;
}

bool AssumptionReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AssumptionCheck& c) { return !c.applicable || c.passed; });
}

const AssumptionCheck* AssumptionReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

struct MarginTracker {
  double margin = std::numeric_limits<double>::max();
  SampleWitness worst;

  void offer(double m, const SampleWitness& w) {
    if (m < margin) {
      margin = m;
      worst = w;
    }
  }
};

}  // namespace

AssumptionReport validate_assumptions(const OperatorSpec& spec, const SampleGrid& grid) {
  if (grid.x_points.empty() || grid.s_levels.empty() || grid.xi_directions.empty() ||
      grid.xi_magnitudes.empty())
    throw InvalidParameterError("assumption validation requires a nonempty sample grid");

  const double p = spec.p;
  const double delta = spec.delta;

  std::vector<Vec2> xis;
  xis.push_back(Vec2::Zero());
  for (const Vec2& d : grid.xi_directions)
    for (double m : grid.xi_magnitudes) xis.push_back(m * d);

  MarginTracker ell, mon, growth, growthphi;
  MarginTracker lam_sign, lam_bound, lam_coer;

  // growth constants for the smoothed kernel family; recorded with the check
  const double guard = std::pow(2.0, std::max(0.0, p - 2.0));
  const double a0 = guard * (1.0 + std::pow(delta, p - 1.0));
  const double a1 = guard * std::pow(delta, p - 1.0);
  // additive slack of the coercivity bound introduced by delta-smoothing
  const double delta_slack = delta > 0.0 && p < 2.0 ? std::pow(delta, p) : 0.0;

  for (const Vec2& x : grid.x_points) {
    const double c_here = spec.c_field.size() > 0 ? spec.c_field.value_at_point(x) : 0.0;
    for (double s : grid.s_levels) {
      for (size_t i = 0; i < xis.size(); ++i) {
        const Vec2& xi = xis[i];
        const Vec2 ax = spec.a(x, s, xi);
        SampleWitness w{x, s, xi, Vec2::Zero(), 0.0, 0.0};

        // (ell) a.xi >= alpha |xi|^p, up to the quantified smoothing slack
        w.lhs = ax.dot(xi) + delta_slack;
        w.rhs = spec.alpha * std::pow(xi.norm(), p);
        ell.offer(w.lhs - w.rhs, w);

        // (growth) |a| <= a0 (|xi|^{p-1} + |s|^{p-1}) + a1
        w.lhs = a0 * (std::pow(xi.norm(), p - 1.0) + std::pow(std::abs(s), p - 1.0)) + a1;
        w.rhs = ax.norm();
        growth.offer(w.lhs - w.rhs, w);

        // (mon) strict monotonicity on consecutive grid pairs
        if (i + 1 < xis.size()) {
          const Vec2& eta = xis[i + 1];
          if ((xi - eta).squaredNorm() > 0.0) {
            const Vec2 aeta = spec.a(x, s, eta);
            SampleWitness wm{x, s, xi, eta, 0.0, 0.0};
            wm.lhs = (ax - aeta).dot(xi - eta);
            mon.offer(wm.lhs, wm);
          }
        }
      }

      // (growthphi) |Phi(x,s)| <= c(x)(1 + |s|^{p-1})
      {
        SampleWitness w{x, s, Vec2::Zero(), Vec2::Zero(), 0.0, 0.0};
        w.lhs = c_here * (1.0 + std::pow(std::abs(s), p - 1.0));
        w.rhs = spec.phi(x, s).norm();
        growthphi.offer(w.lhs - w.rhs, w);
      }

      if (spec.has_lambda()) {
        const auto& lt = *spec.lambda_term;
        const double lv = lt.value(x, s);
        SampleWitness w{x, s, Vec2::Zero(), Vec2::Zero(), 0.0, 0.0};
        w.lhs = lv * s;
        lam_sign.offer(w.lhs, w);
        // boundedness on compacts: |lambda| finite at each sample
        w.lhs = std::isfinite(lv) ? 1.0 : -1.0;
        w.rhs = std::abs(lv);
        lam_bound.offer(w.lhs, w);
        // |lambda(x,s)| >= g(s)
        w.lhs = std::abs(lv);
        w.rhs = lt.coercivity_profile(s);
        lam_coer.offer(w.lhs - w.rhs, w);
      }
    }
  }

  auto entry = [](const std::string& name, const MarginTracker& t, bool applicable,
                  double tol = 0.0) {
    AssumptionCheck c;
    c.name = name;
    c.applicable = applicable;
    if (applicable) {
      c.margin = t.margin;
      c.worst = t.worst;
      c.passed = t.margin >= -tol;
    }
    return c;
  };

  const double tiny = 1e-12;
  AssumptionReport report;
  report.checks.push_back(entry("ell", ell, true, tiny));
  // strict inequality: a zero margin on a nonzero pair is a failure
  {
    AssumptionCheck c = entry("mon", mon, true);
    c.passed = mon.margin > 0.0;
    report.checks.push_back(c);
  }
  report.checks.push_back(entry("growth", growth, true, tiny));
  report.checks.push_back(entry("growthphi", growthphi, true, tiny));
  report.checks.push_back(entry("lambda_sign", lam_sign, spec.has_lambda(), tiny));
  report.checks.push_back(entry("lambda_bound", lam_bound, spec.has_lambda()));
  report.checks.push_back(entry("lambda_coercivity", lam_coer, spec.has_lambda(), tiny));
  return report;
}

}  // namespace medfem
