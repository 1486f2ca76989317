#include "sdefit/linearize.hpp"

#include <cmath>

#include "sdefit/errors.hpp"

namespace sdefit {

namespace {

double fd_step(double xj) { return std::max(1e-6, 1e-6 * std::abs(xj)); }

// Central finite-difference Jacobian of fn through the model's clamp.
template <typename Fn>
Mat fd_jacobian(const Fn& fn, const StateSpaceModel& model, const Vec& x,
                int rows) {
  const int n = static_cast<int>(x.size());
  Mat jac(rows, n);
  for (int j = 0; j < n; ++j) {
    const double h = fd_step(x[j]);
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const Vec fp = fn(model.clamped(xp));
    const Vec fm = fn(model.clamped(xm));
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

}  // namespace

void LinearizationCoefficients::check_finite(double t) const {
  bool ok = all_finite(A) && all_finite(C) && all_finite(a_const) &&
            all_finite(a_slope);
  for (const auto& Bi : B) ok = ok && all_finite(Bi);
  for (const auto& bi : b_const) ok = ok && all_finite(bi);
  for (const auto& bi : b_slope) ok = ok && all_finite(bi);
  if (!ok)
    throw EvaluationError("linearization produced non-finite coefficients", t);
}

LinearizationCoefficients jacobians(const StateSpaceModel& model, double t,
                                    const Vec& x, const ParamVec& alpha) {
  if (!all_finite(x) || !alpha.allFinite())
    throw EvaluationError("jacobians: non-finite expansion point", t);
  const Vec xc = model.clamped(x);

  LinearizationCoefficients co;
  if (model.jac_drift) {
    co.A = model.jac_drift(t, xc, alpha);
  } else {
    co.A = fd_jacobian(
        [&](const Vec& y) { return model.drift(t, y, alpha); }, model, xc,
        model.d);
  }
  const Vec f0 = model.drift(t, xc, alpha);
  co.a_const = f0 - co.A * xc;
  co.a_slope = model.time_deriv_drift ? model.time_deriv_drift(t, xc, alpha)
                                      : Vec::Zero(model.d).eval();

  co.B.resize(model.m);
  co.b_const.resize(model.m);
  co.b_slope.resize(model.m);
  co.B_is_zero.resize(model.m);
  for (int i = 0; i < model.m; ++i) {
    if (model.jac_diffusion) {
      co.B[i] = model.jac_diffusion(t, xc, alpha, i);
    } else {
      co.B[i] = fd_jacobian(
          [&](const Vec& y) { return model.diffusion(t, y, alpha, i); }, model,
          xc, model.d);
    }
    const Vec g0 = model.diffusion(t, xc, alpha, i);
    co.b_const[i] = g0 - co.B[i] * xc;
    co.b_slope[i] = model.time_deriv_diffusion
                        ? model.time_deriv_diffusion(t, xc, alpha, i)
                        : Vec::Zero(model.d).eval();
    co.B_is_zero[i] = co.B[i].isZero(0.0);
  }

  if (model.jac_obs) {
    co.C = model.jac_obs(t, xc);
  } else {
    co.C = fd_jacobian([&](const Vec& y) { return model.obs_mean(t, y); },
                       model, xc, model.r);
  }

  co.check_finite(t);
  return co;
}

}  // namespace sdefit
