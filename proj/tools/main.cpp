#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sdefit/config.hpp"
#include "sdefit/errors.hpp"
#include "sdefit/experiment.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kDivergence = 3 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sdefit: simulates diffusion processes observed with noise and "
      "estimates their parameters by minimizing an innovation fitness "
      "with a Gaussian EDA, optionally refined by local search."};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "file of 'key = value' lines");

  // Every config key doubles as a flag; later flags override the file.
  sdefit::KeyValueMap overrides;
  for (const auto& key : sdefit::config_keys()) {
    app.add_option_function<std::string>(
        "--" + key.name,
        [&overrides, name = key.name](const std::string& v) {
          overrides[name] = v;
        },
        key.description);
  }

  auto* sim = app.add_subcommand(
      "simulate", "generate a fine-grid path and noisy observations");
  auto* est = app.add_subcommand(
      "estimate", "run one estimation (reads observations.csv if present)");
  auto* rep = app.add_subcommand(
      "replicate", "repeat the estimation on one observation series");
  auto* fil = app.add_subcommand(
      "filter", "run the filter at the configured parameters");
  auto* sli = app.add_subcommand(
      "fitness-slice", "sweep one coordinate of the fitness");
  for (auto* sub : {sim, est, rep, fil, sli}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    sdefit::KeyValueMap raw;
    if (!config_path.empty()) raw = sdefit::load_config_file(config_path);
    for (const auto& [key, value] : overrides) raw[key] = value;
    const sdefit::ExperimentConfig cfg = sdefit::build_experiment(raw);

    if (sim->parsed()) sdefit::cmd_simulate(cfg);
    else if (est->parsed()) sdefit::cmd_estimate(cfg);
    else if (rep->parsed()) sdefit::cmd_replicate(cfg);
    else if (fil->parsed()) sdefit::cmd_filter(cfg);
    else sdefit::cmd_fitness_slice(cfg);
    return kOk;
  } catch (const sdefit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const sdefit::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const sdefit::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
