#pragma once

#include <functional>

#include "sdefit/llfilter.hpp"
#include "sdefit/problem.hpp"
#include "sdefit/types.hpp"

namespace sdefit {

// Flat value returned whenever the filter cannot complete a pass.
inline constexpr double kPenaltyFitness = 1e12;

struct FitnessEvaluation {
  ParamVec alpha;
  double value = 0.0;
  bool penalized = false;
};

// Innovation fitness of alpha: the filter's accumulated value, or
// kPenaltyFitness when the pass failed or overshot the penalty level.
FitnessEvaluation q_fitness(const EstimationProblem& problem,
                            const ParamVec& alpha, int substeps);

using ObjectiveFn = std::function<double(const ParamVec&)>;

// Adapter used by the optimizers; callers share one problem across calls.
ObjectiveFn make_q_objective(const EstimationProblem& problem, int substeps);

}  // namespace sdefit
