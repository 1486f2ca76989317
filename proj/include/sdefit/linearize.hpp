#pragma once

#include <vector>

#include "sdefit/model.hpp"
#include "sdefit/types.hpp"

namespace sdefit {

/// Coefficients of the model linearized at one expansion point (t0, x0):
///
///   drift     f(t, x) ~= A x + a(tau),    a(tau) = a_const + a_slope * tau
///   channel i g_i(t,x) ~= B_i x + b_i(tau)
///   obs       h0(t, x) ~= C x + const
///
/// with tau the time elapsed since t0. The affine parts absorb
/// f(t0, x0) - A x0 and the explicit time derivatives.
struct LinearizationCoefficients {
  Mat A;               // d x d
  std::vector<Mat> B;  // m matrices, d x d
  Mat C;               // r x d
  Vec a_const, a_slope;
  std::vector<Vec> b_const, b_slope;
  std::vector<bool> B_is_zero;  // per channel, lets the filter skip dead terms

  void check_finite(double t) const;
};

/// Linearize the model at (t, x, alpha). Uses analytic Jacobian callbacks
/// when present, otherwise central finite differences with per-coordinate
/// step max(1e-6, 1e-6 |x_j|). The expansion point is clamped onto the
/// model's admissible domain first, and finite differencing goes through
/// the clamped map as well.
LinearizationCoefficients jacobians(const StateSpaceModel& model, double t,
                                    const Vec& x, const ParamVec& alpha);

}  // namespace sdefit
