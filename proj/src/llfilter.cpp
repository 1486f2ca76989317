#include "sdefit/llfilter.hpp"

#include <cmath>
#include <stdexcept>

#include "sdefit/errors.hpp"

namespace sdefit {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Right-hand side of the coupled moment ODEs at elapsed time tau.
void moment_derivative(const LinearizationCoefficients& co, double tau,
                       const Vec& y, const Mat& Q, Vec& dy, Mat& dQ) {
  dy = co.A * y + co.a_const + tau * co.a_slope;
  const Mat aq = co.A * Q;
  dQ = aq + aq.transpose();
  const int m = static_cast<int>(co.B.size());
  for (int i = 0; i < m; ++i) {
    const Vec bi = co.b_const[i] + tau * co.b_slope[i];
    if (co.B_is_zero[i]) {
      dQ += bi * bi.transpose();
    } else {
      const Mat& Bi = co.B[i];
      const Vec By = Bi * y;
      const Mat second = Q + y * y.transpose();
      dQ += Bi * second * Bi.transpose();
      dQ += By * bi.transpose() + bi * By.transpose();
      dQ += bi * bi.transpose();
    }
  }
}

double chol_log_det(const Eigen::LLT<Mat>& llt) {
  double s = 0.0;
  const auto& l = llt.matrixLLT();
  for (int i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

}  // namespace

void EstimationProblem::validate() const {
  model.validate();
  box.validate();
  observations.validate();
  if (observations.count() == 0)
    throw std::invalid_argument("problem: needs at least one observation");
  if (box.size() != model.p)
    throw std::invalid_argument("problem: box size != parameter count");
  if (y0.size() != model.d)
    throw std::invalid_argument("problem: y0 size != state dimension");
  if (Q0.rows() != model.d || Q0.cols() != model.d)
    throw std::invalid_argument("problem: Q0 must be d x d");
  Eigen::SelfAdjointEigenSolver<Mat> es(Q0);
  if (es.eigenvalues().minCoeff() < -1e-10 * (1.0 + Q0.trace()))
    throw std::invalid_argument("problem: Q0 must be PSD");
  for (const auto& z : observations.values)
    if (z.size() != model.r)
      throw std::invalid_argument("problem: observation dimension mismatch");
}

FilterState predict(const FilterState& state,
                    const LinearizationCoefficients& coeffs, double dt,
                    int substeps) {
  if (dt < 0.0) throw std::invalid_argument("predict: dt must be >= 0");
  if (substeps < 1) throw std::invalid_argument("predict: substeps must be >= 1");
  if (dt == 0.0) return state;

  const double hs = dt / static_cast<double>(substeps);
  Vec y = state.y;
  Mat Q = state.Q;
  Vec k1y, k2y, k3y, k4y;
  Mat k1q, k2q, k3q, k4q;

  double tau = 0.0;
  for (int s = 0; s < substeps; ++s) {
    moment_derivative(coeffs, tau, y, Q, k1y, k1q);
    moment_derivative(coeffs, tau + 0.5 * hs, y + (0.5 * hs) * k1y,
                      Q + (0.5 * hs) * k1q, k2y, k2q);
    moment_derivative(coeffs, tau + 0.5 * hs, y + (0.5 * hs) * k2y,
                      Q + (0.5 * hs) * k2q, k3y, k3q);
    moment_derivative(coeffs, tau + hs, y + hs * k3y, Q + hs * k3q, k4y, k4q);
    y += (hs / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    Q += (hs / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    symmetrize(Q);
    tau += hs;
    if (!all_finite(y) || !all_finite(Q))
      throw DivergenceError("predict: non-finite moments", s);
  }
  return FilterState{state.t + dt, std::move(y), std::move(Q)};
}

std::pair<Vec, Mat> innovate(const FilterState& pred,
                             const StateSpaceModel& model,
                             const LinearizationCoefficients& coeffs,
                             const Vec& z) {
  if (!all_finite(pred.y) || !all_finite(pred.Q))
    throw EvaluationError("innovate: non-finite prediction", pred.t);
  const Vec nu = z - model.obs_mean(pred.t, model.clamped(pred.y));
  Mat s = coeffs.C * pred.Q * coeffs.C.transpose() + model.obs_noise_cov;
  symmetrize(s);
  if (!all_finite(nu) || !all_finite(s))
    throw EvaluationError("innovate: non-finite innovation", pred.t);
  const double trace = s.trace();
  if (trace > 0.0)
    s += (kInnovationFloor * trace) * Mat::Identity(s.rows(), s.cols());
  Eigen::LLT<Mat> llt(s);
  if (llt.info() != Eigen::Success)
    throw NonPdError("innovate: innovation covariance not positive definite");
  return {nu, s};
}

FilterState update(const FilterState& pred, const StateSpaceModel& model,
                   const LinearizationCoefficients& coeffs, const Vec& nu,
                   const Mat& innovation_cov) {
  Eigen::LLT<Mat> llt(innovation_cov);
  if (llt.info() != Eigen::Success)
    throw NonPdError("update: innovation covariance not positive definite");
  const Mat cq = coeffs.C * pred.Q;            // r x d
  const Mat gain = llt.solve(cq).transpose();  // d x r, K = Q C' S^{-1}
  FilterState post;
  post.t = pred.t;
  post.y = pred.y + gain * nu;
  const Mat ikc =
      Mat::Identity(pred.Q.rows(), pred.Q.cols()) - gain * coeffs.C;
  post.Q = ikc * pred.Q * ikc.transpose() +
           gain * model.obs_noise_cov * gain.transpose();
  symmetrize(post.Q);
  if (!all_finite(post.y) || !all_finite(post.Q))
    throw EvaluationError("update: non-finite posterior", pred.t);
  return post;
}

FilterRun run_filter(const EstimationProblem& problem, const ParamVec& alpha,
                     int substeps) {
  if (alpha.size() != problem.model.p)
    throw std::invalid_argument("run_filter: alpha size != parameter count");
  if (!alpha.allFinite())
    throw std::invalid_argument("run_filter: alpha must be finite");

  const auto& model = problem.model;
  const auto& obs = problem.observations;
  const long n_gaps = static_cast<long>(obs.count()) - 1;

  FilterRun run;
  run.innovations.reserve(n_gaps > 0 ? n_gaps : 0);
  run.innovation_covs.reserve(n_gaps > 0 ? n_gaps : 0);
  run.filtered_means.reserve(n_gaps > 0 ? n_gaps : 0);
  run.filtered_covs.reserve(n_gaps > 0 ? n_gaps : 0);

  FilterState state{obs.times[0], problem.y0, problem.Q0};
  long k = 0;
  try {
    if (problem.initial_update) {
      const auto coeffs = jacobians(model, state.t, state.y, alpha);
      const auto [nu0, s0] = innovate(state, model, coeffs, obs.values[0]);
      state = update(state, model, coeffs, nu0, s0);
    }
    const bool per_gap =
        problem.linearization == LinearizationUpdate::kPerGap;
    for (k = 0; k < n_gaps; ++k) {
      const double dt = obs.times[k + 1] - obs.times[k];
      FilterState pred = state;
      LinearizationCoefficients coeffs;
      if (per_gap) {
        coeffs = jacobians(model, obs.times[k], state.y, alpha);
        pred = predict(state, coeffs, dt, substeps);
      } else {
        const double hs = dt / substeps;
        for (int s = 0; s < substeps; ++s) {
          coeffs = jacobians(model, pred.t, pred.y, alpha);
          pred = predict(pred, coeffs, hs, 1);
        }
        // The observation map is linearized at the predicted mean.
        coeffs = jacobians(model, obs.times[k + 1], pred.y, alpha);
      }
      const auto [nu, s] = innovate(pred, model, coeffs, obs.values[k + 1]);

      Eigen::LLT<Mat> llt(s);
      Vec u = nu;
      llt.matrixL().solveInPlace(u);
      run.fitness +=
          model.r * kLog2Pi + chol_log_det(llt) + u.squaredNorm();

      state = update(pred, model, coeffs, nu, s);
      run.innovations.push_back(nu);
      run.innovation_covs.push_back(s);
      run.filtered_means.push_back(state.y);
      run.filtered_covs.push_back(state.Q);
    }
  } catch (const EvaluationError& e) {
    run.status = FilterStatus::kPenalized;
    run.penalty_reason = e.what();
    run.penalty_step = k + 1;
  } catch (const DivergenceError& e) {
    run.status = FilterStatus::kPenalized;
    run.penalty_reason = e.what();
    run.penalty_step = k + 1;
  } catch (const NonPdError& e) {
    run.status = FilterStatus::kPenalized;
    run.penalty_reason = e.what();
    run.penalty_step = k + 1;
  } catch (const std::domain_error& e) {
    run.status = FilterStatus::kPenalized;
    run.penalty_reason = e.what();
    run.penalty_step = k + 1;
  }
  if (run.ok() && !std::isfinite(run.fitness)) {
    run.status = FilterStatus::kPenalized;
    run.penalty_reason = "non-finite fitness accumulation";
    run.penalty_step = n_gaps;
  }
  return run;
}

}  // namespace sdefit
