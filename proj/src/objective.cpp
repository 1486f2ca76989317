#include "sdefit/objective.hpp"

namespace sdefit {

FitnessEvaluation q_fitness(const EstimationProblem& problem,
                            const ParamVec& alpha, int substeps) {
  FitnessEvaluation out;
  out.alpha = alpha;
  const FilterRun run = run_filter(problem, alpha, substeps);
  if (!run.ok() || run.fitness >= kPenaltyFitness) {
    out.value = kPenaltyFitness;
    out.penalized = true;
  } else {
    out.value = run.fitness;
  }
  return out;
}

ObjectiveFn make_q_objective(const EstimationProblem& problem, int substeps) {
  return [&problem, substeps](const ParamVec& alpha) {
    return q_fitness(problem, alpha, substeps).value;
  };
}

}  // namespace sdefit
