#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdefit/types.hpp"

namespace sdefit {

/// Continuous-discrete state-space model:
///
///   dx = f(t, x; alpha) dt + sum_i g_i(t, x; alpha) dw_i,   x in R^d
///   z_k = h0(t_k, x(t_k)) + e_k,                e_k ~ N(0, obs_noise_cov)
///
/// Callbacks must be pure. Analytic Jacobians and time derivatives are
/// optional; linearization falls back to central finite differences and a
/// zero time derivative. `clamp_state`, when set, maps a state onto the
/// callbacks' admissible domain and is applied by the simulation and
/// filtering paths before every callback evaluation; the raw callbacks are
/// free to reject out-of-domain states so tests can see how often paths
/// stray.
struct StateSpaceModel {
  int d = 0;  ///< state dimension
  int m = 0;  ///< number of Wiener channels
  int r = 0;  ///< observation dimension
  int p = 0;  ///< parameter count
  std::string name;

  std::function<Vec(double t, const Vec& x, const ParamVec& alpha)> drift;
  std::function<Vec(double t, const Vec& x, const ParamVec& alpha, int channel)>
      diffusion;
  std::function<Vec(double t, const Vec& x)> obs_mean;

  std::function<Mat(double t, const Vec& x, const ParamVec& alpha)> jac_drift;
  std::function<Mat(double t, const Vec& x, const ParamVec& alpha, int channel)>
      jac_diffusion;
  std::function<Mat(double t, const Vec& x)> jac_obs;

  std::function<Vec(double t, const Vec& x, const ParamVec& alpha)>
      time_deriv_drift;
  std::function<Vec(double t, const Vec& x, const ParamVec& alpha, int channel)>
      time_deriv_diffusion;

  Mat obs_noise_cov;  ///< Sigma, r x r symmetric PSD

  /// Data-generation-only observation noise beyond the h0 + e class:
  /// (t, x, xi) -> R^r with xi ~ N(0, extra_noise_var). Ignored by the
  /// filter, which assumes the plain h0 + e observation equation.
  std::function<Vec(double t, const Vec& x, double xi)> extra_obs_noise;
  double extra_noise_var = 0.0;

  std::function<Vec(const Vec& x)> clamp_state;

  Vec clamped(const Vec& x) const { return clamp_state ? clamp_state(x) : x; }

  /// Dimension/shape sanity checks; throws std::invalid_argument.
  void validate() const;
};

/// Per-parameter search intervals [lo_i, hi_i].
struct ParameterBox {
  ParamVec lo;
  ParamVec hi;
  std::vector<std::string> names;
  std::optional<ParamVec> true_values;

  int size() const { return static_cast<int>(lo.size()); }
  double width(int i) const { return hi[i] - lo[i]; }
  double max_width() const { return (hi - lo).maxCoeff(); }
  bool contains(const ParamVec& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
  ParamVec project(const ParamVec& x) const {
    return x.cwiseMax(lo).cwiseMin(hi);
  }
  void validate() const;
};

/// The two benchmark models and a linear test model.
StateSpaceModel fhn_model();
StateSpaceModel multiplicative_model();

/// Scalar Ornstein-Uhlenbeck test model dx = a1 (mu - x) dt + sigma dw,
/// z = x + e, Var(e) = obs_var, with the mean-reversion rate a1 as the one
/// free parameter. Linear, so exact moment propagation is available as an
/// oracle.
StateSpaceModel ou_model(double mu = 0.5, double sigma = 0.3,
                         double obs_var = 0.01);

/// Default search boxes for the built-in models (true values attached).
ParameterBox default_box(const std::string& model_name);

/// Look up a built-in model by CLI/config name ("fhn", "mult", "ou").
StateSpaceModel model_by_name(const std::string& name);

}  // namespace sdefit
