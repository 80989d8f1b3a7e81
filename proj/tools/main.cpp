// medfem command line: runs the experiments described by a config file and
// writes deterministic JSON/CSV reports.

#include "medfem/config.hpp"
#include "medfem/errors.hpp"
#include "medfem/run.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

int verbosity() {
  const char* env = std::getenv("MEDFEM_VERBOSE");
  return env ? std::atoi(env) : 0;
}

int run_experiment(const std::string& config_path, const std::optional<std::string>& experiment,
                   const std::optional<std::string>& out_dir) {
  try {
    const auto written = medfem::run_config(config_path, experiment, out_dir);
    if (verbosity() > 0)
      for (const auto& path : written) std::cerr << "wrote " << path << "\n";
    std::cout << written.front() << "\n";
    return 0;
  } catch (const medfem::Error& e) {
    nlohmann::ordered_json err = {{"error",
                                   {{"code", static_cast<int>(e.exit_code())},
                                    {"type", typeid(e).name()},
                                    {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    nlohmann::ordered_json err = {{"error", {{"code", 1}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"medfem: nonlinear elliptic Neumann solver with truncation continuation"};
  app.require_subcommand(1);

  struct SubSpec {
    const char* name;
    const char* help;
    std::optional<std::string> experiment;
  };
  const SubSpec subs[] = {
      {"solve", "single weak solve", std::string("solve")},
      {"continue", "epsilon continuation", std::string("continuation")},
      {"stability", "perturbed-data stability experiment", std::string("stability")},
      {"zero-order", "solve with the zero-order term", std::string("zero_order")},
      {"diagnose", "structural assumption report", std::string("diagnose")},
  };

  std::string config_path;
  std::string out_dir;

  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_path, "config file path")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->callback([&, exp = s.experiment]() {
      std::optional<std::string> out =
          out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir);
      std::exit(run_experiment(config_path, exp, out));
    });
  }

  CLI::App* vc = app.add_subcommand("validate-config", "parse and validate a config file");
  vc->add_option("--config", config_path, "config file path")->required();
  vc->callback([&]() {
    try {
      const medfem::RunConfig config = medfem::parse_config_file(config_path);
      std::cout << medfem::emit_config(config);
      std::exit(0);
    } catch (const medfem::Error& e) {
      std::cerr << e.what() << "\n";
      std::exit(static_cast<int>(e.exit_code()));
    }
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
