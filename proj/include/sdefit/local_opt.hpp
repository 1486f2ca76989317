#pragma once

#include "sdefit/objective.hpp"
#include "sdefit/problem.hpp"
#include "sdefit/rng.hpp"
#include "sdefit/types.hpp"
#include "sdefit/umdac.hpp"

namespace sdefit {

struct LocalConfig {
  long max_iters = 0;     // 0 means use the default 400 * p
  double x_tol = 0.0;     // 0 means use the default 1e-6 * max box width
  double f_tol = 1e-8;
  int substeps = 64;

  void validate() const;
};

// Filled-in copy of cfg with the box-dependent defaults resolved.
LocalConfig resolve_local_config(const LocalConfig& cfg,
                                 const ParameterBox& box);

// Nelder-Mead descent with every trial point projected onto the box.
// Standard coefficients (reflect 1, expand 2, contract 0.5, shrink 0.5);
// initial simplex edges are 5% of each box width, flipped inward at a bound.
// Stops when the simplex diameter < x_tol and fitness spread < f_tol, or at
// max_iters. converged is false when the best fitness stays at the penalty
// level or ends above the fitness of x0. Throws std::invalid_argument when
// x0 is outside the box.
EstimationResult local_minimize(const ObjectiveFn& fn, const ParamVec& x0,
                                const ParameterBox& box,
                                const LocalConfig& cfg);

EstimationResult local_minimize(const EstimationProblem& problem,
                                const ParamVec& x0, const ParameterBox& box,
                                const LocalConfig& cfg);

// EDA pass followed by a local pass from its estimate; returns whichever
// has the lower fitness, so the result is never worse than the EDA output.
EstimationResult refined_estimate(const EstimationProblem& problem,
                                  const UmdacConfig& ucfg,
                                  const LocalConfig& lcfg, RngStream& s);

// Same composition on an arbitrary objective, for surrogate tests.
EstimationResult refined_estimate(const ObjectiveFn& fn,
                                  const ParameterBox& box,
                                  const UmdacConfig& ucfg,
                                  const LocalConfig& lcfg, RngStream& s);

}  // namespace sdefit
