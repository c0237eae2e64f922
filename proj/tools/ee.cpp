// Command-line driver: solve, study, sweep and verify.
#include <iostream>

#include <CLI11.hpp>

#include "ee/errors.hpp"
#include "ee/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite-element solver for coupled elliptic systems with a critical-growth energy equation"};
  app.require_subcommand(1);

  std::string config, out, grid, suite;
  int refine = 0;

  auto* solve = app.add_subcommand("solve", "Solve one configuration");
  solve->add_option("--config", config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "Output directory")->required();

  auto* study = app.add_subcommand("study", "Convergence study over uniform refinements");
  study->add_option("--config", config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  study->add_option("--refine", refine, "Number of mesh levels (>= 2)")->required();
  study->add_option("--out", out, "Output directory")->required();

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"fem", "thermistor", "nernst_planck", "estimates", "uniqueness", "threshold"}));
  verify->add_option("--out", out, "Directory for results.json");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep over a grid of config overrides");
  sweep->add_option("--config", config, "Base configuration (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--grid", grid, "Sweep grid (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ee::kExitOk : ee::kExitUsage;
  }

  try {
    if (*solve) return ee::run_solve(ee::load_config(config), out, std::cout);
    if (*study) return ee::run_study(ee::load_config(config), refine, out, std::cout);
    if (*sweep) return ee::run_sweep(ee::load_config(config), ee::read_json_file(grid), out, std::cout);
    return ee::run_verify(suite, out, std::cout);
  } catch (const ee::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ee::kExitUsage;
  } catch (const ee::ContractError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return ee::kExitUsage;
  } catch (const ee::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ee::kExitNumerical;
  }
}
