#include "medfem/run.hpp"

#include "medfem/assumptions.hpp"
#include "medfem/calculus.hpp"
#include "medfem/datum.hpp"
#include "medfem/errors.hpp"
#include "medfem/snapshot.hpp"
#include "medfem/stability.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace medfem {

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::string> tokenize(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> tokens;
  std::string t;
  while (in >> t) tokens.push_back(t);
  return tokens;
}

double token_number(const std::vector<std::string>& tokens, size_t i, const std::string& what) {
  if (i >= tokens.size()) throw ConfigError(what + ": missing argument");
  try {
    return std::stod(tokens[i]);
  } catch (const std::exception&) {
    throw ConfigError(what + ": bad number '" + tokens[i] + "'");
  }
}

DiscreteField read_nodal_file(const std::string& path, const MeshPtr& mesh,
                              const std::string& what) {
  std::ifstream in(path);
  if (!in) throw IoError(what + ": cannot open nodal file " + path);
  Eigen::VectorXd v(mesh->node_count());
  for (int i = 0; i < mesh->node_count(); ++i)
    if (!(in >> v[i]))
      throw ConfigError(what + ": nodal file " + path + " has fewer values than mesh nodes");
  double extra;
  if (in >> extra)
    throw ConfigError(what + ": nodal file " + path + " has more values than mesh nodes");
  return DiscreteField(mesh, std::move(v));
}

}  // namespace

DomainSpec parse_domain(const std::string& domain) {
  const auto tokens = tokenize(domain);
  if (!tokens.empty() && tokens[0] == "interval" && tokens.size() == 3) {
    IntervalDomain iv;
    iv.a = token_number(tokens, 1, "mesh.domain");
    iv.b = token_number(tokens, 2, "mesh.domain");
    return iv;
  }
  if (!tokens.empty() && tokens[0] == "unit_square" && tokens.size() == 1)
    return UnitSquareDomain{};
  throw ConfigError("mesh.domain: expected 'interval <a> <b>' or 'unit_square'");
}

DiscreteField resolve_field_spec(const std::string& spec, const MeshPtr& mesh,
                                 const std::string& what) {
  const auto tokens = tokenize(spec);
  if (tokens.empty()) throw ConfigError(what + ": empty field spec");
  const std::string& kind = tokens[0];
  const int dim = mesh->dimension;
  constexpr double pi = std::numbers::pi;

  auto arity = [&](size_t n) {
    if (tokens.size() != n)
      throw ConfigError(what + ": spec '" + kind + "' takes " + std::to_string(n - 1) +
                        " arguments");
  };

  if (kind == "zero") {
    arity(1);
    return DiscreteField(mesh);
  }
  if (kind == "constant") {
    arity(2);
    const double v = token_number(tokens, 1, what);
    return DiscreteField::sample(mesh, [v](const Vec2&) { return v; });
  }
  if (kind == "cosine") {
    arity(1);
    if (dim != 1) throw ConfigError(what + ": 'cosine' is a 1D datum");
    return DiscreteField::sample(
        mesh, [pi](const Vec2& x) { return pi * pi * std::cos(pi * x.x()); });
  }
  if (kind == "cosine2d") {
    arity(1);
    if (dim != 2) throw ConfigError(what + ": 'cosine2d' is a 2D datum");
    return DiscreteField::sample(mesh, [pi](const Vec2& x) {
      return 2.0 * pi * pi * std::cos(pi * x.x()) * std::cos(pi * x.y());
    });
  }
  if (kind == "plap3") {
    arity(1);
    if (dim != 1) throw ConfigError(what + ": 'plap3' is a 1D datum");
    return DiscreteField::sample(
        mesh, [pi](const Vec2& x) { return pi * pi * pi * std::sin(2.0 * pi * x.x()); });
  }
  if (kind == "reaction-cosine") {
    arity(1);
    if (dim != 1) throw ConfigError(what + ": 'reaction-cosine' is a 1D datum");
    return DiscreteField::sample(mesh, [pi](const Vec2& x) {
      return (1.0 + pi * pi) * std::cos(pi * x.x());
    });
  }
  if (kind == "dipole") {
    // 1D: dipole x0 x1 width mass; 2D: dipole x0x x0y x1x x1y width mass
    if (dim == 1) {
      arity(5);
      const Vec2 x0(token_number(tokens, 1, what), 0.0);
      const Vec2 x1(token_number(tokens, 2, what), 0.0);
      return make_dipole(mesh, x0, x1, token_number(tokens, 3, what),
                         token_number(tokens, 4, what));
    }
    arity(7);
    const Vec2 x0(token_number(tokens, 1, what), token_number(tokens, 2, what));
    const Vec2 x1(token_number(tokens, 3, what), token_number(tokens, 4, what));
    return make_dipole(mesh, x0, x1, token_number(tokens, 5, what),
                       token_number(tokens, 6, what));
  }
  if (kind == "bump") {
    // bump <center...> <width> <amp>
    if (dim == 1) {
      arity(4);
      const Vec2 x0(token_number(tokens, 1, what), 0.0);
      const double width = token_number(tokens, 2, what);
      const double amp = token_number(tokens, 3, what);
      return DiscreteField::sample(
          mesh, [=](const Vec2& x) { return amp * quartic_bump(x, x0, width); });
    }
    arity(5);
    const Vec2 x0(token_number(tokens, 1, what), token_number(tokens, 2, what));
    const double width = token_number(tokens, 3, what);
    const double amp = token_number(tokens, 4, what);
    return DiscreteField::sample(
        mesh, [=](const Vec2& x) { return amp * quartic_bump(x, x0, width); });
  }
  if (kind == "file") {
    arity(2);
    return read_nodal_file(tokens[1], mesh, what);
  }
  throw ConfigError(what + ": unknown field spec '" + kind + "'");
}

ResolvedProblem resolve_problem(const RunConfig& config) {
  ResolvedProblem rp;
  rp.mesh = build_mesh_shared(parse_domain(config.mesh.domain), config.mesh.resolution);

  DiscreteField c = resolve_field_spec(config.problem.c_spec, rp.mesh, "problem.c");
  DiscreteField f = resolve_field_spec(config.problem.f_spec, rp.mesh, "problem.f");
  // nodal projection leaves an O(h^2) mean defect on analytically compatible
  // data; the spec datum must satisfy the discrete compatibility condition
  const bool has_lambda = !config.problem.lambda_spec.empty();
  f = prepare_datum(f, 0.0, /*require_compat=*/!has_lambda);

  const double p = config.problem.op == "linear-diffusion" ? 2.0 : config.problem.p;
  const double delta = p == 2.0 ? 0.0 : config.problem.delta;
  rp.spec = make_prototype(p, std::move(c), std::move(f), delta);
  rp.spec.name = config.problem.op;

  if (has_lambda) {
    const auto tokens = tokenize(config.problem.lambda_spec);
    if (tokens.size() == 2 && tokens[0] == "power")
      rp.spec.lambda_term = make_power_lambda(token_number(tokens, 1, "problem.lambda"));
    else
      throw ConfigError("problem.lambda: expected 'power <gamma>'");
  }
  return rp;
}

namespace {

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["problem"] = {{"operator", c.problem.op},
                  {"p", c.problem.p},
                  {"delta", c.problem.delta},
                  {"c", c.problem.c_spec},
                  {"f", c.problem.f_spec}};
  if (!c.problem.lambda_spec.empty()) j["problem"]["lambda"] = c.problem.lambda_spec;
  j["mesh"] = {{"domain", c.mesh.domain}, {"resolution", c.mesh.resolution}};
  j["solver"] = {{"newton_tol", c.solver.newton_tol},
                 {"newton_max_iter", c.solver.newton_max_iter},
                 {"picard_tol", c.solver.picard_tol},
                 {"picard_max_iter", c.solver.picard_max_iter},
                 {"relaxation", c.solver.relaxation},
                 {"gauge", c.solver.gauge},
                 {"quad_order", c.solver.quad_order},
                 {"epsilon", c.solver.epsilon}};
  j["continuation"] = {{"epsilons", c.continuation.epsilons},
                       {"k_levels", c.continuation.k_levels},
                       {"n_levels", c.continuation.n_levels},
                       {"stop_tol", c.continuation.stop_tol}};
  j["stability"] = {{"j_values", c.stability.j_values},
                    {"g", c.stability.g_spec},
                    {"phi_mode", c.stability.phi_mode}};
  j["experiment"] = c.experiment;
  j["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
  return j;
}

nlohmann::ordered_json solution_to_json(const WeakSolution& sol, double p, int quad_order) {
  return {{"median", sol.median},
          {"median_enforced", sol.median_enforced},
          {"gauge_shift", sol.gauge_shift},
          {"iterations", sol.iterations},
          {"newton_iterations", sol.inner_newton_counts},
          {"final_residual", sol.final_residual},
          {"picard_distances", sol.picard_distances},
          {"lp_norm", lp_norm(sol.field, p, quad_order)},
          {"w1p_seminorm", w1p_seminorm(sol.field, p)},
          {"min", sol.field.values().minCoeff()},
          {"max", sol.field.values().maxCoeff()}};
}

// scalar summaries only; curve data is reserved for continuation reports
nlohmann::ordered_json scalar_estimates_json(const DiscreteField& field,
                                             const RegularizedSpec& rspec,
                                             const ContinuationSchedule& schedule,
                                             int quad_order) {
  const EstimateReport rep = apriori_report(field, rspec, schedule, quad_order);
  return {{"m_hat", rep.m_hat},
          {"log_estimate_lhs", rep.log_estimate_lhs},
          {"log_estimate_bound", rep.log_estimate_bound},
          {"poincare_max", rep.poincare_max}};
}

nlohmann::ordered_json estimate_report_to_json(const EstimateReport& rep) {
  nlohmann::ordered_json j;
  j["epsilon"] = rep.epsilon;
  j["mesh_dimension"] = rep.mesh_dimension;
  j["mesh_h"] = rep.mesh_h;
  nlohmann::ordered_json te = nlohmann::ordered_json::array();
  for (const auto& t : rep.truncation_energy)
    te.push_back({{"k", t.k}, {"energy", t.energy}, {"ratio", t.ratio}});
  j["truncation_energy"] = te;
  j["m_hat"] = rep.m_hat;
  j["log_estimate_lhs"] = rep.log_estimate_lhs;
  j["log_estimate_bound"] = rep.log_estimate_bound;
  nlohmann::ordered_json po = nlohmann::ordered_json::array();
  for (const auto& e : rep.poincare) po.push_back({{"k", e.k}, {"ratio", e.ratio}});
  j["poincare"] = po;
  j["poincare_max"] = rep.poincare_max;
  j["measure_decay"] = curve_to_json(rep.measure_decay);
  j["energy_decay"] = curve_to_json(rep.energy_decay);
  j["phi_flux_decay"] = curve_to_json(rep.phi_flux_decay);
  return j;
}

std::string snapshot_text(const DiscreteField& field) {
  std::ostringstream out;
  write_snapshot(out, field);
  return out.str();
}

}  // namespace

RunReport execute(const RunConfig& raw_config,
                  const std::optional<std::string>& experiment_override) {
  RunConfig config = raw_config;
  if (experiment_override) config.experiment = *experiment_override;
  config.validate();

  const auto t0 = Clock::now();
  ResolvedProblem rp = resolve_problem(config);
  const SolveOptions options = config.solver.to_options();
  const ContinuationSchedule schedule = config.continuation.to_schedule();
  const double p = rp.spec.p;
  const int quad_order = options.quad_order;

  RunReport report;
  report.experiment = config.experiment;
  report.hash = config_hash(config);

  nlohmann::ordered_json& j = report.body;
  j["schema_version"] = 1;
  j["artifact"] = {{"name", "medfem"}, {"version", kArtifactVersion}};
  j["experiment"] = config.experiment;
  j["seed"] = 0;
  j["config"] = config_to_json(config);

  // experiments require a spec that passes the structural checks; diagnose
  // reports them instead
  if (config.experiment != "diagnose") {
    const AssumptionReport checks =
        validate_assumptions(rp.spec, SampleGrid::for_mesh(*rp.mesh));
    if (!checks.all_passed()) {
      std::string failed;
      for (const auto& chk : checks.checks)
        if (chk.applicable && !chk.passed) failed += " " + chk.name;
      throw ValidationError("operator spec fails structural checks:" + failed);
    }
  }

  std::ostringstream timings;
  const auto t_setup = seconds_since(t0);
  timings << "setup " << t_setup << "\n";
  const auto t1 = Clock::now();

  if (config.experiment == "solve") {
    const RegularizedSpec rspec = config.solver.epsilon > 0.0
                                      ? regularize(rp.spec, config.solver.epsilon)
                                      : unregularized(rp.spec);
    const WeakSolution sol = fixed_point_solve(*rp.mesh, rspec, options);
    j["solution"] = solution_to_json(sol, p, quad_order);
    j["estimates"] = scalar_estimates_json(sol.field, rspec, schedule, quad_order);
    report.solution_snapshot = snapshot_text(sol.field);
  } else if (config.experiment == "zero_order") {
    rp.spec.check_invariants();
    const RegularizedSpec rspec = config.solver.epsilon > 0.0
                                      ? regularize(rp.spec, config.solver.epsilon)
                                      : unregularized(rp.spec);
    const WeakSolution sol = zero_order_solve(*rp.mesh, rspec, options);
    j["solution"] = solution_to_json(sol, p, quad_order);
    j["estimates"] = scalar_estimates_json(sol.field, rspec, schedule, quad_order);
    report.solution_snapshot = snapshot_text(sol.field);
  } else if (config.experiment == "continuation") {
    const RenormSolution rsol = epsilon_continuation(*rp.mesh, rp.spec, schedule, options);
    nlohmann::ordered_json stages = nlohmann::ordered_json::array();
    nlohmann::ordered_json estimates = nlohmann::ordered_json::array();
    for (const auto& stage : rsol.stages) {
      const RegularizedSpec rspec = regularize(rp.spec, stage.epsilon);
      const EstimateReport rep =
          apriori_report(stage.solution.field, rspec, schedule, quad_order);
      stages.push_back({{"epsilon", stage.epsilon},
                        {"iterations", stage.solution.iterations},
                        {"newton_iterations", stage.solution.inner_newton_counts},
                        {"final_residual", stage.solution.final_residual},
                        {"median", stage.solution.median},
                        {"m_hat", rep.m_hat}});
      estimates.push_back(estimate_report_to_json(rep));
      if (&stage == &rsol.stages.back()) {
        report.curves.push_back(rep.measure_decay);
        report.curves.push_back(rep.energy_decay);
        report.curves.push_back(rep.phi_flux_decay);
        Curve te{"truncation_energy", {}};
        for (const auto& t : rep.truncation_energy) te.points.push_back({t.k, t.energy});
        report.curves.push_back(te);
      }
    }
    nlohmann::ordered_json dists = nlohmann::ordered_json::object();
    for (size_t ki = 0; ki < rsol.k_levels.size(); ++ki)
      dists["k=" + format_double(rsol.k_levels[ki])] = rsol.truncation_distances[ki];
    j["continuation"] = {{"converged", rsol.converged},
                         {"stages", stages},
                         {"truncation_distances", dists}};
    j["estimates"] = estimates;
    report.solution_snapshot = snapshot_text(rsol.final_field);
  } else if (config.experiment == "stability") {
    DiscreteField g = resolve_field_spec(config.stability.g_spec, rp.mesh, "stability.g");
    std::vector<StabilityMember> members;
    for (int jv : config.stability.j_values) {
      StabilityMember m;
      m.label = "j=" + std::to_string(jv);
      m.f = rp.spec.f.with_values(rp.spec.f.values() + (1.0 / jv) * g.values());
      if (config.stability.phi_mode == "scale") {
        const double factor = 1.0 - 1.0 / jv;
        const ConvectionFn base_phi = rp.spec.phi;
        m.phi = [factor, base_phi](const Vec2& x, double s) { return factor * base_phi(x, s); };
      } else {
        m.phi = rp.spec.phi;
      }
      members.push_back(std::move(m));
    }
    const StabilityTable table =
        stability_experiment(*rp.mesh, rp.spec, members, schedule, options);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    Curve dcurve{"stability_distances", {}};
    for (size_t i = 0; i < table.rows.size(); ++i) {
      const auto& row = table.rows[i];
      rows.push_back({{"label", row.label},
                      {"truncate_distances", row.truncate_distances},
                      {"field_lp_distance", row.field_lp_distance},
                      {"distance", row.distance}});
      dcurve.points.push_back({double(config.stability.j_values[i]), row.distance});
    }
    j["stability"] = {{"k_levels", table.k_levels}, {"rows", rows}};
    report.curves.push_back(dcurve);
  } else if (config.experiment == "diagnose") {
    const SampleGrid grid = SampleGrid::for_mesh(*rp.mesh);
    const AssumptionReport rep = validate_assumptions(rp.spec, grid);
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : rep.checks) {
      nlohmann::ordered_json entry = {{"name", c.name},
                                      {"applicable", c.applicable},
                                      {"passed", c.applicable ? c.passed : true}};
      if (c.applicable) {
        entry["margin"] = c.margin;
        entry["witness"] = {{"x", {c.worst.x.x(), c.worst.x.y()}},
                            {"s", c.worst.s},
                            {"xi", {c.worst.xi.x(), c.worst.xi.y()}},
                            {"lhs", c.worst.lhs},
                            {"rhs", c.worst.rhs}};
      }
      checks.push_back(entry);
    }
    j["assumptions"] = {{"all_passed", rep.all_passed()}, {"checks", checks}};
  } else {
    throw ConfigError("unknown experiment '" + config.experiment + "'");
  }

  timings << "experiment " << seconds_since(t1) << "\n";
  timings << "total " << seconds_since(t0) << "\n";
  report.timings_text = timings.str();
  j["timings"] = {{"file", report.base_name() + ".timings.txt"}};
  return report;
}

std::vector<std::string> run_config(const std::string& config_path,
                                    const std::optional<std::string>& experiment_override,
                                    const std::optional<std::string>& out_override) {
  RunConfig config = parse_config_file(config_path);
  if (experiment_override) config.experiment = *experiment_override;

  // the --out override only redirects files; the report identity (hash,
  // config echo) stays that of the config itself
  RunReport report = execute(config);
  OutputConfig out = config.output;
  if (out_override) out.directory = *out_override;
  return emit_report(report, out);
}

}  // namespace medfem
