#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdefit/local_opt.hpp"
#include "sdefit/model.hpp"
#include "sdefit/problem.hpp"
#include "sdefit/types.hpp"
#include "sdefit/umdac.hpp"

namespace sdefit {

using KeyValueMap = std::map<std::string, std::string>;

// Flat `key = value` lines; '#' starts a comment line; blank lines ignored.
// Duplicate keys are an error (files double as experiment provenance).
KeyValueMap parse_config_text(const std::string& text);
KeyValueMap load_config_file(const std::string& path);

// Every key the config file and the CLI accept, with its default shown in
// `--help`. Values are strings; vectors are comma-separated.
struct ConfigKey {
  std::string name;
  std::string description;
};
const std::vector<ConfigKey>& config_keys();

// Typed experiment settings resolved from raw keys plus model defaults.
struct ExperimentConfig {
  std::string model_name = "fhn";
  ParamVec true_alpha;
  Vec x0;

  double sim_h = 0.0;       // model default when unset
  long sim_n_steps = 0;     // default: round(obs_n * obs_delta / sim_h)
  long sim_thin = 0;        // trajectory.csv row stride; 0 = auto
  double obs_delta = 0.5;
  long obs_n = 0;           // observations after t0; model default when unset

  ParameterBox box;
  int filter_substeps = 64;      // fhn default 256 (stiff stable branch)
  double filter_q0 = 1e-2;       // Q0 = filter_q0 * I
  std::optional<Vec> filter_y0;  // default: x0
  LinearizationUpdate filter_linearization = LinearizationUpdate::kPerGap;

  std::string algo = "umdac";
  UmdacConfig umdac;        // population default: 20 * p
  LocalConfig local;

  int reps = 1;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int jobs = 1;

  int slice_coord = 1;      // 1-based
  int slice_grid = 41;
  std::optional<ParamVec> slice_center;

  StateSpaceModel model;    // resolved instance

  void validate() const;
};

// Applies model defaults, then overrides from raw. Unknown keys, malformed
// values, and dimension mismatches raise ConfigError.
ExperimentConfig build_experiment(const KeyValueMap& raw);

// Comma-separated list of reals -> vector; throws ConfigError on junk.
std::vector<double> parse_double_list(const std::string& text);

}  // namespace sdefit
