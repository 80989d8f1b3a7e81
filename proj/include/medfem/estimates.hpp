#pragma once

#include "medfem/continuation.hpp"
#include "medfem/operator_spec.hpp"

#include <string>
#include <vector>

namespace medfem {

struct CurvePoint {
  double parameter = 0.0;
  double value = 0.0;
};

struct Curve {
  std::string name;
  std::vector<CurvePoint> points;
};

struct TruncationEnergyEntry {
  double k = 0.0;
  double energy = 0.0;  // integral of |grad T_k(u)|^p
  double ratio = 0.0;   // energy / (k + k^p)
};

struct PoincareEntry {
  double k = 0.0;
  double ratio = 0.0;  // Lp norm over W1p seminorm of the median-0 truncate
};

// Measured counterparts of the a priori estimates for one stage field.
struct EstimateReport {
  double epsilon = 0.0;
  int mesh_dimension = 0;
  double mesh_h = 0.0;

  std::vector<TruncationEnergyEntry> truncation_energy;
  double m_hat = 0.0;  // max_k energy(k)/(k + k^p)

  double log_estimate_lhs = 0.0;    // integral of |grad u|^p / (1+|u|)^p
  double log_estimate_bound = 0.0;  // explicit Young-chain bound

  Curve measure_decay;    // A -> meas{|u| > A} * ln(1 + A)
  Curve energy_decay;     // n -> (1/n) * energy on {|u| < n}
  Curve phi_flux_decay;   // n -> (1/n) * integral |Phi(x,u)| |grad T_n(u)|

  std::vector<PoincareEntry> poincare;
  double poincare_max = 0.0;

  void check_finite() const;
};

// (1/n) integral over {|u| < n} of a_eps(x,u,grad u).grad u, with the
// indicator evaluated at quadrature points.
Curve energy_decay_profile(const DiscreteField& field, const RegularizedSpec& rspec,
                           const std::vector<double>& n_levels,
                           int quad_order = kDefaultQuadOrder);

EstimateReport apriori_report(const DiscreteField& field, const RegularizedSpec& rspec,
                              const ContinuationSchedule& schedule,
                              int quad_order = kDefaultQuadOrder);

struct WeakUpgradeResult {
  bool saturated = false;
  Curve energies;  // k -> integral |grad T_k(u)|^p
};

// Truncation-energy saturation: the discrete witness that the field lies in
// W^{1,p}. Compares the energies at k_max and k_max/2.
WeakUpgradeResult weak_upgrade_check(const RenormSolution& sol, const RegularizedSpec& rspec,
                                     const std::vector<double>& k_list);

}  // namespace medfem
