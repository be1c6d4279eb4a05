#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "critmass/app.hpp"

namespace {

// Diagnostics go to stderr so that stdout carries only command output.
void configure_logging() {
  auto logger = spdlog::stderr_color_mt("critmass");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("CRITMASS_LOG")) spdlog::set_level(spdlog::level::from_str(level));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Critical-mass classifier and simulator for two-species aggregation-diffusion systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::vector<std::string> sections;
  std::uint64_t seed = 0;
  std::size_t parallel = 0;
  bool verbose = false;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "directory for result files");
  app.add_option("--override", overrides, "KEY.PATH=VALUE applied to the configuration")->take_all();
  app.add_option("--seed", seed, "random seed for multi-start searches")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--parallel", parallel, "worker threads for sweeps")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto* classify = app.add_subcommand("classify", "predict global existence or blow-up");
  auto* constant = app.add_subcommand("constant", "estimate a sharp functional-inequality constant");
  auto* simulate = app.add_subcommand("simulate", "evolve initial data and report the trajectory");
  auto* sweep = app.add_subcommand("sweep", "compare predictions with simulations over a grid");
  auto* verify = app.add_subcommand("verify", "run the self-check battery");
  verify->add_option("--section", sections, "restrict to these sections")->take_all();
  verify->add_flag("--verbose", verbose, "one line per check");
  for (auto* sub : {classify, constant, simulate, sweep, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : critmass::kExitConfig;
  }

  try {
    critmass::Json doc = config_path.empty() ? critmass::Json::object() : critmass::read_config_file(config_path);
    for (const auto& o : overrides) critmass::apply_override(doc, o);
    if (!out_dir.empty()) doc["out"] = out_dir;
    if (app.count("--seed")) doc["seed"] = seed;
    if (app.count("--parallel")) doc["parallel"] = parallel;
    critmass::RunConfig cfg = critmass::parse_config(std::move(doc));
    if (!sections.empty()) cfg.sections = sections;
    cfg.verbose = cfg.verbose || verbose;

    if (classify->parsed()) return critmass::cmd_classify(cfg, std::cout);
    if (constant->parsed()) return critmass::cmd_constant(cfg, std::cout);
    if (simulate->parsed()) return critmass::cmd_simulate(cfg, std::cout);
    if (sweep->parsed()) return critmass::cmd_sweep(cfg, std::cout);
    return critmass::cmd_verify(cfg, std::cout);
  } catch (const critmass::Error& e) {
    spdlog::error("{}", e.what());
    return critmass::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return critmass::kExitConfig;
  }
}
