#include "medfem/config.hpp"

#include "medfem/errors.hpp"
#include "medfem/snapshot.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace medfem {

SolveOptions SolverConfig::to_options() const {
  SolveOptions o;
  o.newton_tol = newton_tol;
  o.newton_max_iter = newton_max_iter;
  o.picard_tol = picard_tol;
  o.picard_max_iter = picard_max_iter;
  o.relaxation = relaxation;
  o.gauge = gauge == "pin_node" ? GaugeMode::pin_node : GaugeMode::zero_mean_multiplier;
  o.quad_order = quad_order;
  return o;
}

ContinuationSchedule ContinuationConfig::to_schedule() const {
  ContinuationSchedule s;
  s.epsilons = epsilons;
  s.k_levels = k_levels;
  s.n_levels = n_levels;
  s.stop_tol = stop_tol;
  return s;
}

namespace {

std::vector<std::string> tokenize(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> tokens;
  std::string t;
  while (in >> t) tokens.push_back(t);
  return tokens;
}

std::string normalize_tokens(const std::string& s) {
  const auto tokens = tokenize(s);
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a decimal number, got '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
  }
}

std::vector<double> parse_number_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& t : tokenize(value)) out.push_back(parse_number(key, t));
  if (out.empty()) throw ConfigError("config key '" + key + "': expected a list of numbers");
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const auto& t : tokenize(value)) out.push_back(parse_int(key, t));
  if (out.empty()) throw ConfigError("config key '" + key + "': expected a list of integers");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + value + "'");
}

void apply_key(RunConfig& c, const std::string& section, const std::string& key,
               const std::string& value) {
  const std::string qual = section + "." + key;
  if (section == "problem") {
    if (key == "operator") c.problem.op = value;
    else if (key == "p") c.problem.p = parse_number(qual, value);
    else if (key == "delta") c.problem.delta = parse_number(qual, value);
    else if (key == "c") c.problem.c_spec = normalize_tokens(value);
    else if (key == "f") c.problem.f_spec = normalize_tokens(value);
    else if (key == "lambda") c.problem.lambda_spec = normalize_tokens(value);
    else if (key == "allow_lambda") c.problem.allow_lambda = parse_bool(qual, value);
    else throw ConfigError("unknown config key '" + qual + "'");
  } else if (section == "mesh") {
    if (key == "domain") c.mesh.domain = normalize_tokens(value);
    else if (key == "resolution") c.mesh.resolution = parse_int(qual, value);
    else throw ConfigError("unknown config key '" + qual + "'");
  } else if (section == "solver") {
    if (key == "newton_tol") c.solver.newton_tol = parse_number(qual, value);
    else if (key == "newton_max_iter") c.solver.newton_max_iter = parse_int(qual, value);
    else if (key == "picard_tol") c.solver.picard_tol = parse_number(qual, value);
    else if (key == "picard_max_iter") c.solver.picard_max_iter = parse_int(qual, value);
    else if (key == "relaxation") c.solver.relaxation = parse_number(qual, value);
    else if (key == "gauge") c.solver.gauge = value;
    else if (key == "quad_order") c.solver.quad_order = parse_int(qual, value);
    else if (key == "epsilon") c.solver.epsilon = parse_number(qual, value);
    else throw ConfigError("unknown config key '" + qual + "'");
  } else if (section == "continuation") {
    if (key == "epsilons") c.continuation.epsilons = parse_number_list(qual, value);
    else if (key == "k_levels") c.continuation.k_levels = parse_number_list(qual, value);
    else if (key == "n_levels") c.continuation.n_levels = parse_number_list(qual, value);
    else if (key == "stop_tol") c.continuation.stop_tol = parse_number(qual, value);
    else throw ConfigError("unknown config key '" + qual + "'");
  } else if (section == "stability") {
    if (key == "j_values") c.stability.j_values = parse_int_list(qual, value);
    else if (key == "g") c.stability.g_spec = normalize_tokens(value);
    else if (key == "phi_mode") c.stability.phi_mode = value;
    else throw ConfigError("unknown config key '" + qual + "'");
  } else if (section == "experiment") {
    if (key == "kind") c.experiment = value;
    else throw ConfigError("unknown config key '" + qual + "'");
  } else if (section == "output") {
    if (key == "directory") c.output.directory = value;
    else if (key == "formats") c.output.formats = tokenize(value);
    else throw ConfigError("unknown config key '" + qual + "'");
  } else {
    throw ConfigError("unknown config section '[" + section + "]'");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = normalize_tokens(line.substr(0, eq));
    std::string value = normalize_tokens(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": key outside any section");
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    apply_key(config, section, key, value);
  }
  config.validate();
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void RunConfig::validate() const {
  auto expect_one_of = [](const std::string& what, const std::string& v,
                          std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
      if (v == a) return;
    std::string msg = "config key '" + what + "': invalid value '" + v + "' (expected one of";
    for (const char* a : allowed) msg += std::string(" ") + a;
    throw ConfigError(msg + ")");
  };

  expect_one_of("problem.operator", problem.op, {"prototype", "linear-diffusion"});
  if (!(problem.p > 1.0)) throw ConfigError("config key 'problem.p': must be > 1");
  if (problem.delta < 0.0) throw ConfigError("config key 'problem.delta': must be >= 0");
  expect_one_of("solver.gauge", solver.gauge, {"zero_mean_multiplier", "pin_node"});
  expect_one_of("experiment.kind", experiment,
                {"solve", "continuation", "stability", "zero_order", "diagnose"});
  expect_one_of("stability.phi_mode", stability.phi_mode, {"none", "scale"});
  for (const auto& f : output.formats) expect_one_of("output.formats", f, {"json", "csv"});

  const auto domain_tokens = tokenize(mesh.domain);
  if (domain_tokens.empty() ||
      (domain_tokens[0] != "interval" && domain_tokens[0] != "unit_square"))
    throw ConfigError("config key 'mesh.domain': expected 'interval <a> <b>' or 'unit_square'");
  if (domain_tokens[0] == "interval" && domain_tokens.size() != 3)
    throw ConfigError("config key 'mesh.domain': interval needs two endpoints");
  if (mesh.resolution < 1) throw ConfigError("config key 'mesh.resolution': must be >= 1");

  if (solver.epsilon < 0.0) throw ConfigError("config key 'solver.epsilon': must be >= 0");

  // lambda only belongs to zero-order runs unless explicitly allowed
  const bool has_lambda = !problem.lambda_spec.empty();
  if (experiment == "zero_order" && !has_lambda)
    throw ConfigError("experiment zero_order requires 'problem.lambda'");
  if (has_lambda && experiment != "zero_order" && experiment != "diagnose" &&
      !problem.allow_lambda)
    throw ConfigError("'problem.lambda' is only used by zero_order runs; set "
                      "'problem.allow_lambda = true' to keep it");

  // referenced nodal files must exist at validation time
  for (const std::string* spec : {&problem.c_spec, &problem.f_spec, &stability.g_spec}) {
    const auto tokens = tokenize(*spec);
    if (tokens.size() == 2 && tokens[0] == "file" && !std::filesystem::exists(tokens[1]))
      throw ConfigError("referenced nodal file does not exist: " + tokens[1]);
  }

  for (int j : stability.j_values)
    if (j < 1) throw ConfigError("config key 'stability.j_values': entries must be >= 1");
}

namespace {

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v[i]);
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[problem]\n";
  out << "operator = " << c.problem.op << "\n";
  out << "p = " << format_double(c.problem.p) << "\n";
  out << "delta = " << format_double(c.problem.delta) << "\n";
  out << "c = " << c.problem.c_spec << "\n";
  out << "f = " << c.problem.f_spec << "\n";
  if (!c.problem.lambda_spec.empty()) out << "lambda = " << c.problem.lambda_spec << "\n";
  if (c.problem.allow_lambda) out << "allow_lambda = true\n";
  out << "\n[mesh]\n";
  out << "domain = " << c.mesh.domain << "\n";
  out << "resolution = " << c.mesh.resolution << "\n";
  out << "\n[solver]\n";
  out << "newton_tol = " << format_double(c.solver.newton_tol) << "\n";
  out << "newton_max_iter = " << c.solver.newton_max_iter << "\n";
  out << "picard_tol = " << format_double(c.solver.picard_tol) << "\n";
  out << "picard_max_iter = " << c.solver.picard_max_iter << "\n";
  out << "relaxation = " << format_double(c.solver.relaxation) << "\n";
  out << "gauge = " << c.solver.gauge << "\n";
  out << "quad_order = " << c.solver.quad_order << "\n";
  out << "epsilon = " << format_double(c.solver.epsilon) << "\n";
  out << "\n[continuation]\n";
  out << "epsilons = " << join_numbers(c.continuation.epsilons) << "\n";
  out << "k_levels = " << join_numbers(c.continuation.k_levels) << "\n";
  out << "n_levels = " << join_numbers(c.continuation.n_levels) << "\n";
  out << "stop_tol = " << format_double(c.continuation.stop_tol) << "\n";
  out << "\n[stability]\n";
  out << "j_values = " << join_ints(c.stability.j_values) << "\n";
  out << "g = " << c.stability.g_spec << "\n";
  out << "phi_mode = " << c.stability.phi_mode << "\n";
  out << "\n[experiment]\n";
  out << "kind = " << c.experiment << "\n";
  out << "\n[output]\n";
  out << "directory = " << c.output.directory << "\n";
  std::string formats;
  for (size_t i = 0; i < c.output.formats.size(); ++i)
    formats += (i ? " " : "") + c.output.formats[i];
  out << "formats = " << formats << "\n";
  return out.str();
}

std::string config_hash(const RunConfig& config) {
  const std::string text = emit_config(config);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace medfem
