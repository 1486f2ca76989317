#include "sdefit/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "sdefit/errors.hpp"

namespace sdefit {

namespace {

constexpr double kDivergenceBound = 1e12;

// PSD square root of the observation noise covariance: Cholesky when PD,
// eigendecomposition with clipped negatives otherwise (covers Sigma = 0).
Mat noise_sqrt(const Mat& sigma) {
  if (sigma.isZero(0.0)) return Mat::Zero(sigma.rows(), sigma.cols());
  Eigen::LLT<Mat> llt(sigma);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
  Vec ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
}

}  // namespace

void ObservationSeries::validate() const {
  if (values.size() != times.size())
    throw std::invalid_argument("observations: times/values length mismatch");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      throw std::invalid_argument(
          "observations: times must be strictly increasing");
  for (const auto& z : values)
    if (!all_finite(z))
      throw std::invalid_argument("observations: non-finite value");
}

Trajectory simulate_path(const StateSpaceModel& model, const ParamVec& alpha,
                         const Vec& x0, double t0, double h, long n_steps,
                         RngStream& stream) {
  if (h <= 0.0) throw std::invalid_argument("simulate_path: h must be > 0");
  if (n_steps < 1)
    throw std::invalid_argument("simulate_path: n_steps must be >= 1");

  Trajectory traj;
  traj.t0 = t0;
  traj.h = h;
  traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.states.push_back(x0);

  const double sqrt_h = std::sqrt(h);
  Vec x = x0;
  for (long j = 0; j < n_steps; ++j) {
    const double t = t0 + static_cast<double>(j) * h;
    const Vec xc = model.clamped(x);
    Vec next = x + h * model.drift(t, xc, alpha);
    for (int i = 0; i < model.m; ++i) {
      const double eta = stream.standard_normal();
      next += (sqrt_h * eta) * model.diffusion(t, xc, alpha, i);
    }
    if (!all_finite(next) || next.cwiseAbs().maxCoeff() > kDivergenceBound)
      throw DivergenceError("simulate_path: state diverged", j + 1);
    x = next;
    traj.states.push_back(x);
  }
  return traj;
}

std::vector<Vec> subsample(const Trajectory& traj, double delta, long n) {
  if (traj.states.empty())
    throw std::invalid_argument("subsample: empty trajectory");
  if (delta <= 0.0) throw std::invalid_argument("subsample: delta must be > 0");
  const double ratio = delta / traj.h;
  const double stride_d = std::round(ratio);
  if (stride_d < 1.0 || std::abs(ratio - stride_d) > 1e-9 * ratio)
    throw GridMismatchError(
        "subsample: delta is not an integer multiple of the fine step");
  const long stride = static_cast<long>(stride_d);
  const long last = n * stride;
  if (last > static_cast<long>(traj.states.size()) - 1)
    throw std::out_of_range("subsample: n*delta exceeds trajectory span");

  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k <= n; ++k)
    out.push_back(traj.states[static_cast<std::size_t>(k * stride)]);
  return out;
}

ObservationSeries generate_observations(const StateSpaceModel& model,
                                        const std::vector<Vec>& states,
                                        const std::vector<double>& times,
                                        RngStream& stream) {
  if (states.size() != times.size())
    throw std::invalid_argument(
        "generate_observations: states/times length mismatch");

  const Mat noise_l = noise_sqrt(model.obs_noise_cov);
  ObservationSeries obs;
  obs.times = times;
  obs.true_states = states;
  obs.values.reserve(states.size());

  Vec eta(model.r);
  for (std::size_t k = 0; k < states.size(); ++k) {
    Vec z = model.obs_mean(times[k], states[k]);
    if (model.extra_obs_noise) {
      const double xi =
          stream.normal(0.0, std::sqrt(model.extra_noise_var));
      z += model.extra_obs_noise(times[k], states[k], xi);
    }
    for (int j = 0; j < model.r; ++j) eta[j] = stream.standard_normal();
    z += noise_l * eta;
    obs.values.push_back(z);
  }
  obs.validate();
  return obs;
}

}  // namespace sdefit
