#include "sdefit/local_opt.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sdefit {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
constexpr double kInitialEdgeFrac = 0.05;

struct Vertex {
  ParamVec x;
  double f = 0.0;
};

double simplex_diameter(const std::vector<Vertex>& simplex) {
  double d = 0.0;
  for (std::size_t i = 1; i < simplex.size(); ++i)
    d = std::max(d, (simplex[i].x - simplex[0].x).lpNorm<Eigen::Infinity>());
  return d;
}

}  // namespace

void LocalConfig::validate() const {
  if (max_iters < 0) throw std::invalid_argument("local: max_iters must be >= 0");
  if (x_tol < 0.0) throw std::invalid_argument("local: x_tol must be >= 0");
  if (f_tol <= 0.0) throw std::invalid_argument("local: f_tol must be > 0");
  if (substeps < 1) throw std::invalid_argument("local: substeps must be >= 1");
}

LocalConfig resolve_local_config(const LocalConfig& cfg,
                                 const ParameterBox& box) {
  cfg.validate();
  LocalConfig out = cfg;
  if (out.max_iters == 0) out.max_iters = 400L * box.size();
  if (out.x_tol == 0.0) out.x_tol = 1e-6 * box.max_width();
  return out;
}

EstimationResult local_minimize(const ObjectiveFn& fn, const ParamVec& x0,
                                const ParameterBox& box,
                                const LocalConfig& cfg) {
  if (!box.contains(x0))
    throw std::invalid_argument("local_minimize: x0 outside the box");
  const LocalConfig c = resolve_local_config(cfg, box);
  const auto start = std::chrono::steady_clock::now();
  const int p = box.size();

  EstimationResult result;
  result.algorithm = "local";

  std::vector<Vertex> simplex(p + 1);
  simplex[0].x = x0;
  simplex[0].f = fn(x0);
  result.evaluations = 1;
  const double f_start = simplex[0].f;
  for (int j = 0; j < p; ++j) {
    ParamVec v = x0;
    const double step = kInitialEdgeFrac * box.width(j);
    v[j] = (v[j] + step <= box.hi[j]) ? v[j] + step : v[j] - step;
    simplex[j + 1].x = box.project(v);
    simplex[j + 1].f = fn(simplex[j + 1].x);
    ++result.evaluations;
  }

  auto order = [&simplex]() {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  auto probe = [&](const ParamVec& x) {
    Vertex v{box.project(x), 0.0};
    v.f = fn(v.x);
    ++result.evaluations;
    return v;
  };

  order();
  long iter = 0;
  for (; iter < c.max_iters; ++iter) {
    if (simplex_diameter(simplex) < c.x_tol &&
        std::abs(simplex[p].f - simplex[0].f) < c.f_tol)
      break;

    ParamVec centroid = ParamVec::Zero(p);
    for (int i = 0; i < p; ++i) centroid += simplex[i].x;
    centroid /= static_cast<double>(p);

    Vertex& worst = simplex[p];
    const Vertex refl = probe(centroid + kReflect * (centroid - worst.x));
    if (refl.f < simplex[0].f) {
      const Vertex exp_v = probe(centroid + kExpand * (refl.x - centroid));
      worst = (exp_v.f < refl.f) ? exp_v : refl;
    } else if (refl.f < simplex[p - 1].f) {
      worst = refl;
    } else {
      bool shrink = false;
      if (refl.f < worst.f) {
        const Vertex oc = probe(centroid + kContract * (refl.x - centroid));
        if (oc.f <= refl.f) worst = oc; else shrink = true;
      } else {
        const Vertex ic = probe(centroid - kContract * (centroid - worst.x));
        if (ic.f < worst.f) worst = ic; else shrink = true;
      }
      if (shrink) {
        for (int i = 1; i <= p; ++i) {
          simplex[i].x = simplex[0].x + kShrink * (simplex[i].x - simplex[0].x);
          simplex[i].f = fn(simplex[i].x);
          ++result.evaluations;
        }
      }
    }
    order();
  }

  result.alpha_hat = simplex[0].x;
  result.fitness = simplex[0].f;
  result.converged =
      simplex[0].f < kPenaltyFitness && simplex[0].f <= f_start;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

EstimationResult local_minimize(const EstimationProblem& problem,
                                const ParamVec& x0, const ParameterBox& box,
                                const LocalConfig& cfg) {
  return local_minimize(make_q_objective(problem, cfg.substeps), x0, box, cfg);
}

EstimationResult refined_estimate(const ObjectiveFn& fn,
                                  const ParameterBox& box,
                                  const UmdacConfig& ucfg,
                                  const LocalConfig& lcfg, RngStream& s) {
  EstimationResult eda = umdac_minimize(fn, box, ucfg, s);
  EstimationResult local = local_minimize(fn, eda.alpha_hat, box, lcfg);
  EstimationResult out = (local.fitness <= eda.fitness) ? local : eda;
  out.algorithm = "refined";
  out.trace = eda.trace;
  out.evaluations = eda.evaluations + local.evaluations;
  out.wall_time_s = eda.wall_time_s + local.wall_time_s;
  return out;
}

EstimationResult refined_estimate(const EstimationProblem& problem,
                                  const UmdacConfig& ucfg,
                                  const LocalConfig& lcfg, RngStream& s) {
  EstimationResult eda = umdac_minimize(problem, ucfg, s);
  EstimationResult local =
      local_minimize(problem, eda.alpha_hat, problem.box, lcfg);
  EstimationResult out = (local.fitness <= eda.fitness) ? local : eda;
  out.algorithm = "refined";
  out.trace = eda.trace;
  out.evaluations = eda.evaluations + local.evaluations;
  out.wall_time_s = eda.wall_time_s + local.wall_time_s;
  return out;
}

}  // namespace sdefit
