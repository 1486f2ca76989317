#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdefit/model.hpp"
#include "sdefit/objective.hpp"
#include "sdefit/problem.hpp"
#include "sdefit/rng.hpp"
#include "sdefit/types.hpp"

namespace sdefit {

// Candidate point; fitness is NaN until evaluated.
struct Individual {
  ParamVec x;
  double fitness = std::numeric_limits<double>::quiet_NaN();
  bool penalized = false;

  bool evaluated() const { return !std::isnan(fitness); }
};

// Independent per-coordinate Gaussians; sigma is floored, never zero.
struct GaussianMarginals {
  ParamVec mu;
  ParamVec sigma;
};

struct UmdacConfig {
  int population = 60;          // M
  double tau = 0.3;             // truncation fraction
  double elite_frac = 0.05;     // elites = ceil(elite_frac * M)
  int generations = 50;         // fixed generation budget
  std::optional<double> early_stop_value;  // stop once best < this
  int substeps = 64;            // filter substeps when minimizing q
  int jobs = 1;                 // parallel fitness evaluations

  int selected_count() const;   // floor(tau * M)
  int elite_count() const;      // ceil(elite_frac * M)
  void validate() const;        // M >= 2, 0 < tau <= 1, floor(tau*M) >= 2
};

struct GenerationStats {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  ParamVec best_x;
  ParamVec mu;     // marginals fitted from this generation's selection
  ParamVec sigma;
};

struct EstimationResult {
  ParamVec alpha_hat;
  double fitness = 0.0;
  std::vector<GenerationStats> trace;
  long evaluations = 0;
  double wall_time_s = 0.0;
  bool converged = false;
  std::string algorithm;
};

// M points, coordinates i.i.d. uniform on the box; fitness left unset.
// Draw order: individual-major, coordinate-minor.
std::vector<Individual> init_population(const ParameterBox& box, int M,
                                        RngStream& s);

// The floor(tau*M) lowest-fitness individuals; ties keep original order.
// Throws std::logic_error on an unevaluated individual.
std::vector<Individual> truncation_select(const std::vector<Individual>& pop,
                                          double tau);

// Per-coordinate mean and population (1/n) standard deviation, floored at
// 1e-9 * max box width so sampling never freezes on a converged coordinate.
GaussianMarginals fit_marginals(const std::vector<Individual>& selected,
                                const ParameterBox& box);

// n points, each coordinate rejection-sampled from its marginal until it
// lands in the box (at most 100 attempts, then clamped to the nearer bound).
// Draw order: individual-major, coordinate-minor.
std::vector<Individual> sample_population(const GaussianMarginals& marginals,
                                          const ParameterBox& box, int n,
                                          RngStream& s);

// Generation loop on an arbitrary objective: evaluate, select, fit,
// carry elites, resample. Returns the best individual ever evaluated.
EstimationResult umdac_minimize(const ObjectiveFn& fn, const ParameterBox& box,
                                const UmdacConfig& config, RngStream& s);

// Same loop on the innovation fitness of an estimation problem.
EstimationResult umdac_minimize(const EstimationProblem& problem,
                                const UmdacConfig& config, RngStream& s);

}  // namespace sdefit
