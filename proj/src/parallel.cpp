#include "sdefit/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sdefit {

std::vector<double> evaluate_population_serial(
    const std::vector<ParamVec>& population, const ObjectiveFn& fn) {
  std::vector<double> values(population.size());
  for (std::size_t i = 0; i < population.size(); ++i)
    values[i] = fn(population[i]);
  return values;
}

std::vector<double> evaluate_population(const std::vector<ParamVec>& population,
                                        const ObjectiveFn& fn, int jobs) {
  if (jobs <= 1) return evaluate_population_serial(population, fn);
#ifdef _OPENMP
  std::vector<double> values(population.size());
  const long n = static_cast<long>(population.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (long i = 0; i < n; ++i) values[i] = fn(population[i]);
  return values;
#else
  return evaluate_population_serial(population, fn);
#endif
}

}  // namespace sdefit
