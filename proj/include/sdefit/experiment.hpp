#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdefit/config.hpp"
#include "sdefit/problem.hpp"
#include "sdefit/simulate.hpp"
#include "sdefit/umdac.hpp"

namespace sdefit {

// Stream layout: repetition r draws from stream r, data generation from a
// reserved high stream, so adding repetitions never perturbs the data.
inline constexpr std::uint64_t kDataStreamId = 0x8000000000000000ull;

struct SimulatedData {
  Trajectory trajectory;
  ObservationSeries observations;
};

// Fine-grid path plus observations, both from the data stream of cfg.seed.
SimulatedData make_data(const ExperimentConfig& cfg);

// Observations from `observations.csv` in cfg.out_dir when present,
// otherwise simulated inline; either way the estimation streams see the
// same numbers, so file-based and inline runs match exactly.
ObservationSeries load_or_make_observations(const ExperimentConfig& cfg);

EstimationProblem make_problem(const ExperimentConfig& cfg,
                               ObservationSeries observations);

// One estimator invocation for repetition `rep` (stream id = rep).
// umdac / refined start from the box; loa starts from a uniform draw.
EstimationResult run_one(const ExperimentConfig& cfg,
                         const EstimationProblem& problem, int rep);

struct ReplicationSummary {
  ParamVec min;
  ParamVec max;
  ParamVec mean;
  ParamVec std_dev;          // over non-failed repetitions
  int failures = 0;          // repetitions with converged == false
  double total_runtime_s = 0.0;
  std::vector<EstimationResult> runs;
};

// Command bodies; they throw ConfigError / IoError / DivergenceError and
// let the CLI map those to exit codes.
void cmd_simulate(const ExperimentConfig& cfg);
void cmd_estimate(const ExperimentConfig& cfg);
ReplicationSummary cmd_replicate(const ExperimentConfig& cfg);
void cmd_filter(const ExperimentConfig& cfg);
void cmd_fitness_slice(const ExperimentConfig& cfg);

}  // namespace sdefit
