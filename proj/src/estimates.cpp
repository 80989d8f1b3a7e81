#include "medfem/estimates.hpp"

#include "medfem/calculus.hpp"
#include "medfem/errors.hpp"

#include <cmath>

namespace medfem {

void EstimateReport::check_finite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  bool ok = finite(m_hat) && finite(log_estimate_lhs) && finite(log_estimate_bound) &&
            finite(poincare_max);
  for (const auto& t : truncation_energy) ok = ok && finite(t.energy) && finite(t.ratio);
  for (const Curve* c : {&measure_decay, &energy_decay, &phi_flux_decay})
    for (const auto& pt : c->points) ok = ok && finite(pt.value);
  for (const auto& e : poincare) ok = ok && finite(e.ratio);
  if (!ok) throw NumericError("estimate report contains non-finite entries");
}

Curve energy_decay_profile(const DiscreteField& field, const RegularizedSpec& rspec,
                           const std::vector<double>& n_levels, int quad_order) {
  if (n_levels.empty()) throw InvalidParameterError("energy decay profile needs n levels");
  for (size_t i = 1; i < n_levels.size(); ++i)
    if (!(n_levels[i] > n_levels[i - 1]))
      throw InvalidParameterError("n levels must be strictly increasing");

  const Mesh& mesh = field.mesh();
  const QuadratureRule& rule = quadrature_rule(mesh.dimension, quad_order);

  Curve curve{"energy_decay", {}};
  curve.points.reserve(n_levels.size());
  for (double n : n_levels) {
    double total = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
      const Vec2 g = field.gradient(e);
      double acc = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const double* bary = rule.points[q].data();
        const double uq = field.value_at(e, bary);
        if (std::abs(uq) < n) {
          const Vec2 xq = mesh.element_point(e, bary);
          acc += rule.weights[q] * rspec.a_eps(xq, uq, g).dot(g);
        }
      }
      total += mesh.element_measures[e] * acc;
    }
    curve.points.push_back({n, total / n});
  }
  return curve;
}

namespace {

// Explicit bound of the log estimate via the Young chain: with
// (1+|s|^{p-1}) <= 2 (1+|s|)^{p-1} and the split absorbing alpha/2,
//   lhs <= (2 C0^{p'} / (alpha p' theta^{p'})) ||c||_{p'}^{p'}
//          + 2/(alpha (p-1)) ||f||_1,  theta^p = alpha p / 2, C0 = 2.
double log_estimate_bound(const RegularizedSpec& rspec, int quad_order) {
  const double p = rspec.base.p;
  const double alpha = rspec.base.alpha;
  const double pp = p / (p - 1.0);
  const double c0 = 2.0;
  const double theta = std::pow(alpha * p / 2.0, 1.0 / p);
  const double c_lp = lp_norm(rspec.base.c_field, pp, quad_order);
  const double f_l1 = rspec.datum.lumped_l1_norm();
  return (2.0 * std::pow(c0, pp) / (alpha * pp * std::pow(theta, pp))) * std::pow(c_lp, pp) +
         2.0 / (alpha * (p - 1.0)) * f_l1;
}

double log_estimate_lhs(const DiscreteField& u, double p, int quad_order) {
  const Mesh& mesh = u.mesh();
  const QuadratureRule& rule = quadrature_rule(mesh.dimension, quad_order);
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const double gn = u.gradient(e).norm();
    double acc = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double uq = u.value_at(e, rule.points[q].data());
      acc += rule.weights[q] * std::pow(gn / (1.0 + std::abs(uq)), p);
    }
    total += mesh.element_measures[e] * acc;
  }
  return total;
}

double phi_flux(const DiscreteField& u, const RegularizedSpec& rspec, double n,
                int quad_order) {
  const Mesh& mesh = u.mesh();
  const QuadratureRule& rule = quadrature_rule(mesh.dimension, quad_order);
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const double gn = u.gradient(e).norm();
    double acc = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double* bary = rule.points[q].data();
      const double uq = u.value_at(e, bary);
      if (std::abs(uq) < n) {
        const Vec2 xq = mesh.element_point(e, bary);
        acc += rule.weights[q] * rspec.base.phi(xq, uq).norm() * gn;
      }
    }
    total += mesh.element_measures[e] * acc;
  }
  return total;
}

}  // namespace

EstimateReport apriori_report(const DiscreteField& field, const RegularizedSpec& rspec,
                              const ContinuationSchedule& schedule, int quad_order) {
  schedule.check();
  const double p = rspec.base.p;

  EstimateReport rep;
  rep.epsilon = rspec.epsilon;
  rep.mesh_dimension = field.mesh().dimension;
  rep.mesh_h = field.mesh().max_element_diameter();

  for (double k : schedule.k_levels) {
    const DiscreteField tk = truncate_field(field, k);
    const double energy = std::pow(w1p_seminorm(tk, p), p);
    TruncationEnergyEntry entry{k, energy, energy / (k + std::pow(k, p))};
    rep.truncation_energy.push_back(entry);
    rep.m_hat = std::max(rep.m_hat, entry.ratio);

    const double semi = w1p_seminorm(tk, p);
    if (semi > 0.0) {
      const double shift = median(tk);
      const DiscreteField centered = tk.with_values(tk.values().array() - shift);
      rep.poincare.push_back({k, lp_norm(centered, p, quad_order) / semi});
      rep.poincare_max = std::max(rep.poincare_max, rep.poincare.back().ratio);
    }
  }

  rep.log_estimate_lhs = log_estimate_lhs(field, p, quad_order);
  rep.log_estimate_bound = log_estimate_bound(rspec, quad_order);

  // A-grid reaches below the n levels so bounded desk-scale solutions still
  // produce a nontrivial decay curve
  rep.measure_decay.name = "measure_decay";
  std::vector<double> a_levels{0.125, 0.25, 0.5};
  for (double a : schedule.n_levels)
    if (a > a_levels.back()) a_levels.push_back(a);
  for (double a : a_levels)
    rep.measure_decay.points.push_back(
        {a, distribution_measure(field, a, quad_order) * std::log1p(a)});

  rep.energy_decay = energy_decay_profile(field, rspec, schedule.n_levels, quad_order);

  rep.phi_flux_decay.name = "phi_flux_decay";
  for (double n : schedule.n_levels)
    rep.phi_flux_decay.points.push_back({n, phi_flux(field, rspec, n, quad_order) / n});

  rep.check_finite();
  return rep;
}

WeakUpgradeResult weak_upgrade_check(const RenormSolution& sol, const RegularizedSpec& rspec,
                                     const std::vector<double>& k_list) {
  if (k_list.size() < 2) throw InvalidParameterError("weak upgrade check needs >= 2 k values");
  for (size_t i = 1; i < k_list.size(); ++i)
    if (!(k_list[i] > k_list[i - 1]))
      throw InvalidParameterError("k list must be strictly increasing");

  const double p = rspec.base.p;
  const DiscreteField& u = sol.final_field;

  WeakUpgradeResult out;
  out.energies.name = "truncation_energy";
  for (double k : k_list)
    out.energies.points.push_back({k, std::pow(w1p_seminorm(truncate_field(u, k), p), p)});

  const double k_max = k_list.back();
  const double e_max = std::pow(w1p_seminorm(truncate_field(u, k_max), p), p);
  const double e_half = std::pow(w1p_seminorm(truncate_field(u, 0.5 * k_max), p), p);
  out.saturated = e_max == 0.0 || (e_half > 0.0 && e_max / e_half - 1.0 <= 1e-6);
  return out;
}

}  // namespace medfem
