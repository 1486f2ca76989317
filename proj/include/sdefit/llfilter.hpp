#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sdefit/linearize.hpp"
#include "sdefit/problem.hpp"
#include "sdefit/types.hpp"

namespace sdefit {

/// Conditional mean and covariance estimate at time t.
struct FilterState {
  double t = 0.0;
  Vec y;
  Mat Q;
};

enum class FilterStatus { kOk, kPenalized };

/// One filter sweep: innovations nu_k, their covariances, the filtered
/// moments after each observation, and the accumulated fitness
///
///   q = n r ln(2 pi) + sum_k [ ln det S_k + nu_k' S_k^{-1} nu_k ]
///
/// over the n innovations actually formed. status == kPenalized means the
/// sweep aborted (non-finite values or a covariance that failed its
/// positive-definite factorization) and the stored sequences are the
/// partial results up to the failing step.
struct FilterRun {
  std::vector<Vec> innovations;
  std::vector<Mat> innovation_covs;
  std::vector<Vec> filtered_means;
  std::vector<Mat> filtered_covs;
  double fitness = 0.0;
  FilterStatus status = FilterStatus::kOk;
  std::string penalty_reason;
  long penalty_step = -1;  ///< observation index of the failure, or -1

  bool ok() const { return status == FilterStatus::kOk; }
};

/// Relative diagonal loading applied to the innovation covariance. Only
/// matters when the eigenvalue spread exceeds 10^12, where an unfloored
/// Cholesky outcome would be decided by rounding noise.
inline constexpr double kInnovationFloor = 1e-12;

/// Propagate mean and covariance over [state.t, state.t + dt] through the
/// linearized moment ODEs
///
///   dy/dt = A y + a(tau)
///   dQ/dt = A Q + Q A' + sum_i [ B_i (Q + y y') B_i'
///                                + B_i y b_i(tau)' + b_i(tau) y' B_i'
///                                + b_i(tau) b_i(tau)' ]
///
/// with classical RK4 on `substeps` equal substeps, symmetrizing Q after
/// each substep. Q is not eigenvalue-clipped: when a frozen linearization
/// is unstable enough to blow up the moments, the failure surfaces as a
/// penalty downstream, which is informative to the optimizer. dt == 0
/// returns the input unchanged.
FilterState predict(const FilterState& state,
                    const LinearizationCoefficients& coeffs, double dt,
                    int substeps);

/// Innovation nu = z - h0(t, y_pred) and its covariance
/// S = C Q_pred C' + Sigma (symmetrized). Throws NonPdError when S fails
/// the Cholesky factorization.
std::pair<Vec, Mat> innovate(const FilterState& pred,
                             const StateSpaceModel& model,
                             const LinearizationCoefficients& coeffs,
                             const Vec& z);

/// Measurement update with gain K = Q C' S^{-1}, solved by factorization:
/// y <- y + K nu, and the covariance contraction Q <- Q - K C Q evaluated
/// in the algebraically equivalent Joseph form
/// (I - KC) Q (I - KC)' + K Sigma K', which stays PSD under rounding even
/// when Q spans many orders of magnitude.
FilterState update(const FilterState& pred, const StateSpaceModel& model,
                   const LinearizationCoefficients& coeffs, const Vec& nu,
                   const Mat& innovation_cov);

/// Full sweep over all observation gaps: relinearize at each filtered
/// state, predict, innovate, update, accumulate the fitness. Never throws;
/// failures land in the returned status.
FilterRun run_filter(const EstimationProblem& problem, const ParamVec& alpha,
                     int substeps);

}  // namespace sdefit
