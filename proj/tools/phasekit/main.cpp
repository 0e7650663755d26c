// phasekit command-line front end.
//
// Exit codes: 0 ok, 1 failed check, 2 configuration error, 3 inadequate grid,
// 4 rank-deficient sample set. Human-readable text goes to stderr; stdout
// carries only the paths of files written.
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace pkcli;
  CLI::App app{"phasekit: quantum states as phase-space probability densities"};
  app.set_version_flag("--version", PHASEKIT_VERSION_STRING);
  app.require_subcommand(1);
  app.fallthrough(); // global options may follow the subcommand
  app.set_config("--config", "", "TOML config file; command-line flags override its values");

  RunConfig cfg;
  CommandArgs args;
  app.add_option("--m", cfg.m, "mass")->capture_default_str();
  app.add_option("--omega", cfg.omega, "oscillator frequency")->capture_default_str();
  app.add_option("--sigma", cfg.sigma, "frame width, or 'matched' for 1/sqrt(2 m omega)")->capture_default_str();
  app.add_option("--D", cfg.D, "Fock truncation")->capture_default_str();
  app.add_option("--grid", cfg.grid, "auto | off | H | HQ,HP (half-widths)")->capture_default_str();
  app.add_option("--spacing", cfg.spacing, "grid spacing")->capture_default_str();
  app.add_option("--generator", cfg.generator, "coherent | fock_mixture:w0,w1,... | matrix_file:PATH")
      ->capture_default_str();
  app.add_option("--out", cfg.out, "run directory (default phasekit-runs/<command>-<config hash>)");
  app.add_option("--seed", cfg.seed, "seed for random states")->capture_default_str();

  const char* state_help = "fock:n | coherent:q,p | matrix_file:PATH | random | random_pure";
  auto* density = app.add_subcommand("density", "Husimi density of a state");
  density->add_option("--state", args.state, state_help)->capture_default_str();
  auto* marginals = app.add_subcommand("marginals", "marginals, confidence functions and variances");
  marginals->add_option("--state", args.state, state_help)->capture_default_str();
  auto* expect = app.add_subcommand("expect", "quantum vs classical expectation values");
  expect->add_option("--state", args.state, state_help)->capture_default_str();
  expect->add_option("--symbols", args.symbols, "comma-separated subset of Q,P,Q2,P2,H")->capture_default_str();
  auto* effects = app.add_subcommand("effects", "cell effects with completeness and Fourier reports");
  effects->add_option("--tiles", args.tiles, "cells per axis tiling the grid (default D+2)");
  effects->add_option("--cell", args.cells, "q0,q1,p0,p1 (repeatable; replaces the tiling)");
  auto* reconstruct = app.add_subcommand("reconstruct", "density matrix from a sampled density");
  reconstruct->add_option("--input", args.input, "q,p,rho CSV")->required();
  reconstruct->add_option("--truth", args.truth, "operator or vector JSON to compare against");
  auto* evolve = app.add_subcommand("evolve", "oscillator evolution of the density");
  evolve->add_option("--state", args.state, state_help)->capture_default_str();
  evolve->add_option("--times", args.times, "comma-separated times")->capture_default_str();
  auto* bargmann = app.add_subcommand("bargmann", "Bargmann coefficients of a pure state");
  bargmann->add_option("--state", args.state, state_help)->capture_default_str();
  auto* check = app.add_subcommand("check", "run property-check suites");
  check->add_option("--suite", args.suite, "frame | uncertainty | completeness | bargmann | dynamics | all")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.params();
    if (density->parsed()) return cmd_density(cfg, args);
    if (marginals->parsed()) return cmd_marginals(cfg, args);
    if (expect->parsed()) return cmd_expect(cfg, args);
    if (effects->parsed()) return cmd_effects(cfg, args);
    if (reconstruct->parsed()) return cmd_reconstruct(cfg, args);
    if (evolve->parsed()) return cmd_evolve(cfg, args);
    if (bargmann->parsed()) return cmd_bargmann(cfg, args);
    if (check->parsed()) return cmd_check(cfg, args);
  } catch (const phasekit::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const phasekit::PreconditionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const phasekit::InadequateGridError& e) {
    std::cerr << e.what() << '\n';
    return 3;
  } catch (const phasekit::RankDeficiencyError& e) {
    std::cerr << e.what() << "\nrank " << e.rank() << " of " << e.required() << " required\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
