#include <CLI11.hpp>

#include <string>
#include <vector>

#include "hpr/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "hp-robust: hp-adaptive finite element solver for singularly perturbed\n"
      "reaction-diffusion problems -eps u'' + d(x) u = f on an interval, with\n"
      "a perturbation-robust residual error estimator and smoothness-driven\n"
      "h/p refinement."};
  app.require_subcommand(1);

  hpr::RunConfig config;
  std::vector<std::string> emit_names;
  std::string osc_degree = "p";

  // Options live on the app; the `run` subcommand falls through to them so
  // both `hp-robust run --problem ...` and flat `key = value` config files
  // work.
  app.add_option("--problem", config.problem,
                 "problem name: example1 | example2 | manufactured-sin")
      ->required();
  app.add_option("--epsilon", config.epsilons, "perturbation parameters (comma list)")
      ->delimiter(',')
      ->required();
  app.add_option("--theta", config.adaptive.theta, "Doerfler marking fraction")
      ->capture_default_str();
  app.add_option("--tau", config.adaptive.tau, "smoothness threshold for the hp-decision")
      ->capture_default_str();
  app.add_option("--max-iter", config.adaptive.max_iterations,
                 "maximum number of refinement steps")
      ->capture_default_str();
  app.add_option("--target", config.adaptive.target_estimate,
                 "stop once the estimated error falls below this")
      ->capture_default_str();
  app.add_option("--init-elems", config.adaptive.initial_elements,
                 "elements in the uniform initial mesh")
      ->capture_default_str();
  app.add_option("--init-degree", config.adaptive.initial_degree,
                 "polynomial degree on the initial mesh")
      ->capture_default_str();
  app.add_option("--beta", config.diag_beta,
                 "oscillation exponent for the efficiency diagnostics, in (1/2, 1]")
      ->capture_default_str();
  app.add_option("--osc-degree", osc_degree,
                 "projection degree for the oscillation terms")
      ->check(CLI::IsMember({"p", "2p"}))
      ->capture_default_str();
  app.add_option("--out", config.out_dir, "output directory")
      ->envname("HP_ROBUST_OUT")
      ->capture_default_str();
  app.add_option("--jobs", config.jobs, "parallel worker slots across epsilon runs")
      ->capture_default_str();
  app.add_option("--emit", emit_names,
                 "artifacts: trace,mesh,indicators,diagnostics,solution")
      ->delimiter(',')
      ->check(CLI::IsMember({"trace", "mesh", "indicators", "diagnostics", "solution"}));
  app.set_config("--config", "", "key = value configuration file (flags override)");

  auto* cmd = app.add_subcommand("run", "run adaptive campaigns over an epsilon grid");
  cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly, bad flags -> 2
  }

  if (!emit_names.empty()) {
    config.emit = hpr::EmitFlags{false, false, false, false, false};
    for (const auto& name : emit_names) {
      if (name == "trace") config.emit.trace = true;
      if (name == "mesh") config.emit.mesh = true;
      if (name == "indicators") config.emit.indicators = true;
      if (name == "diagnostics") config.emit.diagnostics = true;
      if (name == "solution") config.emit.solution = true;
    }
  }
  config.osc_degree = osc_degree == "2p" ? hpr::OscillationDegree::TwoP
                                         : hpr::OscillationDegree::P;
  return hpr::run(config);
}
