// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "hstokes/cli.hpp"
#include "hstokes/parallel.hpp"

int main(int argc, char** argv) {
  namespace cli = hstokes::cli;
  CLI::App app{"Half-space Stokes and Navier-Stokes verification campaigns"};
  app.fallthrough();
  app.require_subcommand(1, 1);

  std::string config;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out = "out";
  auto* config_opt = app.add_option("--config", config, "JSON config file (defaults apply to missing keys)");
  auto* seed_opt = app.add_option("--seed", seed, "Overrides the config seed");
  auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads (falls back to HSTOKES_JOBS)");
  app.add_option("--out", out, "Output directory")->capture_default_str();
  for (const auto& name : cli::commands()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cli::kSuccess : cli::kConfigError;
  }

  try {
    const auto workers = cli::resolve_jobs(jobs_opt->count() ? std::optional<int>(jobs) : std::nullopt,
                                           std::getenv("HSTOKES_JOBS"));
    if (workers) hstokes::set_worker_count(*workers);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kConfigError;
  }

  cli::Invocation inv;
  inv.command = app.get_subcommands().front()->get_name();
  if (config_opt->count()) inv.config_path = config;
  if (seed_opt->count()) inv.seed = seed;
  inv.out = out;
  try {
    return cli::run(inv, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kNumericalBudget;
  }
}
