#pragma once

#include <memory>
#include <string>

#include <CLI11.hpp>

#include "experiments.hpp"

namespace burstsync {

/// Command-line parser bound to `cfg`. Every flag may also come from a
/// `key = value` config file passed with --config.
inline std::unique_ptr<CLI::App> make_cli(ExperimentConfig& cfg, std::string& command) {
  auto app = std::make_unique<CLI::App>("Bursty-deletion synchronization laboratory", "burstsync");
  app->set_config("--config", "", "Read flags from a config file");
  app->add_option("command", command, "exact | mc | asym | bruns | typicality | syncdemo | sweep")
      ->required()
      ->check(CLI::IsMember({"exact", "mc", "asym", "bruns", "typicality", "syncdemo", "sweep"}));
  app->add_option("--alpha", cfg.alpha, "Burst exit probability")->capture_default_str();
  app->add_option("--beta", cfg.beta, "Burst start probability")->capture_default_str();
  app->add_option("--betas", cfg.betas, "Comma-separated beta grid (overrides --beta)")->delimiter(',');
  app->add_option("--n", cfg.n_spec, "Block lengths: a..b, a,b,c or a single value")->capture_default_str();
  app->add_option("--samples", cfg.samples, "Monte Carlo samples")->capture_default_str();
  app->add_option("--seed", cfg.seed, "Master seed (required by stochastic commands)");
  app->add_option("-o,--output", cfg.output, "CSV output path (default stdout)");
  app->add_option("--cap", cfg.cap, "Enumeration cap for exact computations")->capture_default_str();
  app->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
  app->add_option("--rates", cfg.rates, "Comma-separated code rates for syncdemo")->delimiter(',');
  app->add_option("--trials", cfg.trials, "Trials per rate for syncdemo, generated b-runs for bruns")
      ->capture_default_str();
  app->add_option("--b", cfg.bs, "Comma-separated burst lengths for bruns")->delimiter(',');
  app->add_option("--tolerance", cfg.tolerance, "Certified tolerance for the constant C")->capture_default_str();
  app->final_callback([&cfg, &command] { cfg.command = parse_command(command); });
  return app;
}

}  // namespace burstsync
