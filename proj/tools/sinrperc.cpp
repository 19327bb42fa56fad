#include "experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace sinrperc::cli;
  if (argc < 2) {
    print_registry(std::cout);
    return kOk;
  }

  CLI::App app{"SINR percolation experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  app.add_subcommand("list", "print the experiment registry");
  auto* run_cmd = app.add_subcommand("run", "run an experiment config");
  std::string config;
  Overrides ov;
  run_cmd->add_option("config", config, "JSON experiment config")->required();
  run_cmd->add_option("--seed", ov.seed, "master seed override");
  run_cmd->add_option("--out", ov.out, "output directory override");
  run_cmd->add_option("--replicas", ov.replicas, "replica count override")->check(CLI::PositiveNumber);
  run_cmd->add_option("--workers", ov.workers, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadConfig;
  }
  if (app.got_subcommand("list")) {
    print_registry(std::cout);
    return kOk;
  }
  return run(config, ov, std::cerr);
}
