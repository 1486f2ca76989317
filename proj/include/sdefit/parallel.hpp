#pragma once

#include <vector>

#include "sdefit/objective.hpp"
#include "sdefit/types.hpp"

namespace sdefit {

// Reference path: evaluates candidates in index order on one thread.
std::vector<double> evaluate_population_serial(
    const std::vector<ParamVec>& population, const ObjectiveFn& fn);

// Parallel path: each candidate writes its own slot, so results are
// bitwise identical to the serial path for any jobs value.
// jobs <= 1 falls through to the serial path; fn must be pure.
std::vector<double> evaluate_population(const std::vector<ParamVec>& population,
                                        const ObjectiveFn& fn, int jobs);

}  // namespace sdefit
