#include "sdefit/model.hpp"

#include <cmath>
#include <stdexcept>

namespace sdefit {

void StateSpaceModel::validate() const {
  if (d < 1 || d > kMaxStateDim)
    throw std::invalid_argument("model: state dimension out of [1, " +
                                std::to_string(kMaxStateDim) + "]");
  if (r < 1 || r > kMaxStateDim)
    throw std::invalid_argument("model: observation dimension out of range");
  if (m < 0) throw std::invalid_argument("model: negative channel count");
  if (p < 0) throw std::invalid_argument("model: negative parameter count");
  if (!drift || !obs_mean || (m > 0 && !diffusion))
    throw std::invalid_argument("model: missing drift/diffusion/obs callback");
  if (obs_noise_cov.rows() != r || obs_noise_cov.cols() != r)
    throw std::invalid_argument("model: obs_noise_cov must be r x r");
  if ((obs_noise_cov - obs_noise_cov.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * (1.0 + obs_noise_cov.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("model: obs_noise_cov must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(obs_noise_cov);
  if (es.eigenvalues().minCoeff() < -1e-12 * (1.0 + es.eigenvalues().cwiseAbs().maxCoeff()))
    throw std::invalid_argument("model: obs_noise_cov must be PSD");
}

void ParameterBox::validate() const {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw std::invalid_argument("box: lo/hi size mismatch or empty");
  for (int i = 0; i < size(); ++i)
    if (!(lo[i] <= hi[i]))
      throw std::invalid_argument("box: lo > hi at coordinate " +
                                  std::to_string(i));
}

StateSpaceModel fhn_model() {
  StateSpaceModel mdl;
  mdl.name = "fhn";
  mdl.d = 2;
  mdl.m = 1;
  mdl.r = 2;
  mdl.p = 3;
  mdl.drift = [](double, const Vec& x, const ParamVec& a) {
    Vec f(2);
    f[0] = 100.0 * (x[0] - x[0] * x[0] * x[0] / 3.0 - x[1]);
    f[1] = a[0] + a[1] * x[0];
    return f;
  };
  mdl.jac_drift = [](double, const Vec& x, const ParamVec& a) {
    Mat j(2, 2);
    j(0, 0) = 100.0 * (1.0 - x[0] * x[0]);
    j(0, 1) = -100.0;
    j(1, 0) = a[1];
    j(1, 1) = 0.0;
    return j;
  };
  // Additive noise on the recovery variable only.
  mdl.diffusion = [](double, const Vec&, const ParamVec& a, int) {
    Vec g(2);
    g[0] = 0.0;
    g[1] = a[2];
    return g;
  };
  mdl.jac_diffusion = [](double, const Vec&, const ParamVec&, int) {
    return Mat::Zero(2, 2).eval();
  };
  mdl.obs_mean = [](double, const Vec& x) { return x; };
  mdl.jac_obs = [](double, const Vec&) { return Mat::Identity(2, 2).eval(); };
  mdl.obs_noise_cov = 1e-6 * Mat::Identity(2, 2);
  return mdl;
}

StateSpaceModel multiplicative_model() {
  StateSpaceModel mdl;
  mdl.name = "mult";
  mdl.d = 2;
  mdl.m = 2;
  mdl.r = 1;
  mdl.p = 5;
  mdl.drift = [](double, const Vec& x, const ParamVec& a) {
    Vec f(2);
    f[0] = a[0] + a[1] * x[0];
    f[1] = a[3] * x[1] * x[1];
    return f;
  };
  mdl.jac_drift = [](double, const Vec& x, const ParamVec& a) {
    Mat j = Mat::Zero(2, 2);
    j(0, 0) = a[1];
    j(1, 1) = 2.0 * a[3] * x[1];
    return j;
  };
  // Channel 0 carries the square-root diffusion on x1; evaluating it below
  // x1 = 0 is a domain error. Discretized paths can dip below zero, so the
  // simulation/filter paths go through clamp_state first.
  mdl.diffusion = [](double, const Vec& x, const ParamVec& a, int channel) {
    Vec g = Vec::Zero(2);
    if (channel == 0) {
      if (x[0] < 0.0)
        throw std::domain_error("multiplicative model: sqrt(x1) with x1 < 0");
      g[0] = a[2] * std::sqrt(x[0]);
    } else {
      g[1] = a[4] * x[0] * x[0];
    }
    return g;
  };
  mdl.jac_diffusion = [](double, const Vec& x, const ParamVec& a, int channel) {
    Mat j = Mat::Zero(2, 2);
    if (channel == 0) {
      if (x[0] < 0.0)
        throw std::domain_error("multiplicative model: sqrt(x1) with x1 < 0");
      // One-sided zero at the boundary, matching the clamped extension.
      j(0, 0) = x[0] > 0.0 ? a[2] / (2.0 * std::sqrt(x[0])) : 0.0;
    } else {
      j(1, 0) = 2.0 * a[4] * x[0];
    }
    return j;
  };
  mdl.obs_mean = [](double, const Vec& x) {
    Vec h(1);
    h[0] = x[1] - 0.001 * x[1] * x[1] * x[1];
    return h;
  };
  mdl.jac_obs = [](double, const Vec& x) {
    Mat c(1, 2);
    c(0, 0) = 0.0;
    c(0, 1) = 1.0 - 0.003 * x[1] * x[1];
    return c;
  };
  mdl.obs_noise_cov = Mat::Constant(1, 1, 0.01);
  // State-dependent observation noise used in data generation only; the
  // filter keeps the plain h0 + e observation model.
  mdl.extra_obs_noise = [](double, const Vec& x, double xi) {
    Vec v(1);
    v[0] = (x[1] - 0.01 * x[1] * x[1]) * xi;
    return v;
  };
  mdl.extra_noise_var = 0.01;
  mdl.clamp_state = [](const Vec& x) {
    Vec y = x;
    if (y[0] < 0.0) y[0] = 0.0;
    return y;
  };
  return mdl;
}

StateSpaceModel ou_model(double mu, double sigma, double obs_var) {
  StateSpaceModel mdl;
  mdl.name = "ou";
  mdl.d = 1;
  mdl.m = 1;
  mdl.r = 1;
  mdl.p = 1;
  mdl.drift = [mu](double, const Vec& x, const ParamVec& a) {
    Vec f(1);
    f[0] = a[0] * (mu - x[0]);
    return f;
  };
  mdl.jac_drift = [](double, const Vec&, const ParamVec& a) {
    return Mat::Constant(1, 1, -a[0]).eval();
  };
  mdl.diffusion = [sigma](double, const Vec&, const ParamVec&, int) {
    return Vec::Constant(1, sigma).eval();
  };
  mdl.jac_diffusion = [](double, const Vec&, const ParamVec&, int) {
    return Mat::Zero(1, 1).eval();
  };
  mdl.obs_mean = [](double, const Vec& x) { return x; };
  mdl.jac_obs = [](double, const Vec&) { return Mat::Identity(1, 1).eval(); };
  mdl.obs_noise_cov = Mat::Constant(1, 1, obs_var);
  return mdl;
}

ParameterBox default_box(const std::string& model_name) {
  ParameterBox box;
  if (model_name == "fhn") {
    box.lo = ParamVec{{0.0, 0.0, 0.0}};
    box.hi = ParamVec{{5.0, 5.0, 1.0}};
    box.names = {"alpha1", "alpha2", "alpha3"};
    box.true_values = ParamVec{{1.0, 1.0, 0.1}};
  } else if (model_name == "mult") {
    box.lo = ParamVec{{0.0, -3.0, 0.0, -3.0, 0.0}};
    box.hi = ParamVec{{2.0, 0.0, 0.3, 0.0, 0.1}};
    box.names = {"alpha1", "alpha2", "alpha3", "alpha4", "alpha5"};
    box.true_values = ParamVec{{1.0, -1.5, 0.1, -1.0, 0.01}};
  } else if (model_name == "ou") {
    box.lo = ParamVec{{0.2}};
    box.hi = ParamVec{{3.0}};
    box.names = {"theta"};
    box.true_values = ParamVec{{1.0}};
  } else {
    throw std::invalid_argument("unknown model name: " + model_name);
  }
  return box;
}

StateSpaceModel model_by_name(const std::string& name) {
  if (name == "fhn") return fhn_model();
  if (name == "mult") return multiplicative_model();
  if (name == "ou") return ou_model();
  throw std::invalid_argument("unknown model name: " + name);
}

}  // namespace sdefit
