#pragma once

#include <vector>

#include "sdefit/model.hpp"
#include "sdefit/rng.hpp"
#include "sdefit/types.hpp"

namespace sdefit {

/// Ground-truth solution sampled on the fine simulation grid
/// t_j = t0 + j h, j = 0..n_steps.
struct Trajectory {
  double t0 = 0.0;
  double h = 0.0;
  std::vector<Vec> states;

  double time_at(std::size_t j) const { return t0 + static_cast<double>(j) * h; }
  double span() const {
    return states.empty() ? 0.0
                          : static_cast<double>(states.size() - 1) * h;
  }
};

/// Discrete observation record: times t_k (strictly increasing) and values
/// z_k. true_states, when present, keeps the subsampled ground truth for
/// error reporting; it never feeds the filter.
struct ObservationSeries {
  std::vector<double> times;
  std::vector<Vec> values;
  std::vector<Vec> true_states;

  std::size_t count() const { return times.size(); }
  void validate() const;
};

/// Euler-Maruyama on the fine grid:
///   x_{j+1} = x_j + f(t_j, x_j; alpha) h + sum_i g_i(t_j, x_j; alpha) sqrt(h) eta_ij
/// with eta_ij ~ N(0,1) drawn step-major, channel-minor from `stream`.
/// Callback evaluations go through the model's clamp_state. Any state
/// component exceeding 1e12 in magnitude aborts with DivergenceError.
Trajectory simulate_path(const StateSpaceModel& model, const ParamVec& alpha,
                         const Vec& x0, double t0, double h, long n_steps,
                         RngStream& stream);

/// States at t_k = t0 + k delta, k = 0..n. delta must be an integer
/// multiple of the fine step within relative tolerance 1e-9 and n*delta
/// must not exceed the trajectory span.
std::vector<Vec> subsample(const Trajectory& traj, double delta, long n);

/// z_k = h0(t_k, x_k) + extra_obs_noise(t_k, x_k, xi_k) + e_k with
/// e_k ~ N(0, obs_noise_cov) and, when the model declares extra noise,
/// xi_k ~ N(0, extra_noise_var). Per observation the draw order is xi
/// first, then the r components of e.
ObservationSeries generate_observations(const StateSpaceModel& model,
                                        const std::vector<Vec>& states,
                                        const std::vector<double>& times,
                                        RngStream& stream);

}  // namespace sdefit
