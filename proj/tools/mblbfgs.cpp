#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mblbfgs/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multi-batch L-BFGS benchmark runner"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool dry_run = false;

  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config file");
  run->add_option("config", config, "Experiment config file")->required();
  run->add_flag("--dry-run", dry_run, "Validate and print the resolved config without training");
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--out", out_dir, "Override the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  mblbfgs::RunOverrides overrides;
  overrides.seed = seed;
  if (out_dir) overrides.output_directory = *out_dir;
  overrides.dry_run = dry_run;
  return static_cast<int>(mblbfgs::run_experiment(config, overrides, std::cout, std::cerr));
}
