#pragma once

#include "sdefit/model.hpp"
#include "sdefit/simulate.hpp"
#include "sdefit/types.hpp"

namespace sdefit {

/// Where the filter refreshes its linearization while predicting across an
/// observation gap. kPerGap (default) freezes the Jacobians at the gap
/// start, the classical local-linearization recursion; kEverySubstep
/// re-evaluates them at the current predicted mean before each integration
/// substep, so the mean follows the nonlinear flow instead. The two agree
/// to roundoff on models whose drift and diffusion are affine in the state.
enum class LinearizationUpdate { kPerGap, kEverySubstep };

/// Everything one estimation needs: the model, the data, the search box,
/// and the filter's initial moments (y0, Q0) at the first observation time.
struct EstimationProblem {
  StateSpaceModel model;
  ObservationSeries observations;
  ParameterBox box;
  Vec y0;
  Mat Q0;
  /// When true, z at t_0 updates (y0, Q0) before the recursion starts. The
  /// first innovation is always formed at t_1 and the update contributes
  /// nothing to the fitness sum.
  bool initial_update = false;
  LinearizationUpdate linearization = LinearizationUpdate::kPerGap;

  void validate() const;
};

}  // namespace sdefit
