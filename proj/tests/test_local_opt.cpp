#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "sdefit/llfilter.hpp"
#include "sdefit/local_opt.hpp"
#include "sdefit/model.hpp"
#include "sdefit/rng.hpp"
#include "sdefit/simulate.hpp"

using namespace sdefit;

namespace {

ParameterBox cube_box(int p, double lo, double hi) {
  ParameterBox box;
  box.lo = ParamVec::Constant(p, lo);
  box.hi = ParamVec::Constant(p, hi);
  return box;
}

ObjectiveFn sphere(const ParamVec& c) {
  return [c](const ParamVec& x) { return (x - c).squaredNorm(); };
}

// Unconstrained minimizer at c; on a box that excludes c the constrained
// minimizer of a separable paraboloid is the componentwise projection.
ParamVec project(const ParamVec& c, const ParameterBox& box) {
  return c.cwiseMax(box.lo).cwiseMin(box.hi);
}

}  // namespace

TEST_CASE("config validation rejects nonsense") {
  LocalConfig bad;
  bad.max_iters = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = LocalConfig{};
  bad.f_tol = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = LocalConfig{};
  bad.substeps = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  const ParameterBox box = cube_box(2, 0.0, 10.0);
  const LocalConfig resolved = resolve_local_config(LocalConfig{}, box);
  CHECK(resolved.max_iters == 800);
  CHECK(resolved.x_tol == doctest::Approx(1e-5));
}

TEST_CASE("a start at the optimum stays put") {
  ParamVec c(2);
  c << 0.25, -0.75;
  const ParameterBox box = cube_box(2, -2.0, 2.0);
  const EstimationResult res = local_minimize(sphere(c), c, box, LocalConfig{});
  CHECK(res.fitness <= 1e-12);
  CHECK((res.alpha_hat - c).cwiseAbs().maxCoeff() < 1e-4);
  CHECK(res.converged);
  CHECK(res.algorithm == "local");
}

TEST_CASE("a minimizer outside the box lands on the projection") {
  ParamVec c(3);
  c << 4.0, -7.0, 0.5;
  const ParameterBox box = cube_box(3, -2.0, 2.0);
  ParamVec x0 = ParamVec::Zero(3);
  const EstimationResult res = local_minimize(sphere(c), x0, box, LocalConfig{});
  const ParamVec expect = project(c, box);  // (2, -2, 0.5)
  CHECK((res.alpha_hat - expect).cwiseAbs().maxCoeff() < 1e-4);
  CHECK(res.converged);
}

TEST_CASE("random starts reach the projected minimizer") {
  ParamVec c(2);
  c << 1.4, 3.1;  // second coordinate outside the box
  const ParameterBox box = cube_box(2, -2.0, 2.0);
  const ParamVec expect = project(c, box);
  RngStream s(99, 0);
  LocalConfig cfg;
  cfg.x_tol = 1e-9;
  // A simplex can occasionally collapse flat along the active bound and
  // stall, so the hit count is allowed one miss in fifty.
  int hits = 0;
  for (int trial = 0; trial < 50; ++trial) {
    ParamVec x0(2);
    for (int i = 0; i < 2; ++i) x0[i] = s.uniform(box.lo[i], box.hi[i]);
    const EstimationResult res = local_minimize(sphere(c), x0, box, cfg);
    CHECK(res.fitness <= sphere(c)(x0));
    CHECK(box.contains(res.alpha_hat));
    if ((res.alpha_hat - expect).cwiseAbs().maxCoeff() < 1e-5) ++hits;
  }
  CHECK(hits >= 49);
}

TEST_CASE("a start outside the box is rejected") {
  const ParameterBox box = cube_box(2, 0.0, 1.0);
  ParamVec x0 = ParamVec::Constant(2, 1.5);
  CHECK_THROWS_AS(
      local_minimize(sphere(ParamVec::Zero(2)), x0, box, LocalConfig{}),
      std::invalid_argument);
}

TEST_CASE("a curved valley is followed to its floor") {
  // Rosenbrock restricted to a box that contains the optimum (1, 1).
  const ObjectiveFn rosen = [](const ParamVec& x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
  };
  const ParameterBox box = cube_box(2, -2.0, 2.0);
  ParamVec x0(2);
  x0 << -1.2, 1.0;
  LocalConfig cfg;
  cfg.x_tol = 1e-10;
  cfg.f_tol = 1e-14;
  const EstimationResult res = local_minimize(rosen, x0, box, cfg);
  CHECK(res.fitness < 1e-8);
  CHECK(std::abs(res.alpha_hat[0] - 1.0) < 1e-3);
  CHECK(std::abs(res.alpha_hat[1] - 1.0) < 1e-3);
}

TEST_CASE("refinement never returns more than the EDA fitness") {
  ParamVec c(3);
  c << 1.0, -2.0, 3.0;
  const ParameterBox box = cube_box(3, -5.0, 5.0);
  UmdacConfig ucfg;
  ucfg.population = 20;
  ucfg.tau = 0.3;
  ucfg.elite_frac = 0.05;
  ucfg.generations = 5;  // deliberately loose, leaves room to refine
  int strictly_better = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RngStream eda_stream(seed, 0);
    const EstimationResult eda =
        umdac_minimize(sphere(c), box, ucfg, eda_stream);
    RngStream refine_stream(seed, 0);
    const EstimationResult both =
        refined_estimate(sphere(c), box, ucfg, LocalConfig{}, refine_stream);
    CHECK(both.fitness <= eda.fitness);
    if (both.fitness < eda.fitness) ++strictly_better;
    CHECK(both.algorithm == "refined");
  }
  CHECK(strictly_better >= 9);
}

TEST_CASE("refinement accounts for the evaluations of both passes") {
  const ParameterBox box = cube_box(2, -5.0, 5.0);
  UmdacConfig ucfg;
  ucfg.population = 10;
  ucfg.tau = 0.3;
  ucfg.elite_frac = 0.1;
  ucfg.generations = 3;
  RngStream s(11, 0);
  const EstimationResult both =
      refined_estimate(sphere(ParamVec::Zero(2)), box, ucfg, LocalConfig{}, s);
  const long eda_budget = 10 + 2L * (10 - 1);
  CHECK(both.evaluations > eda_budget);
}

TEST_CASE("descent on an excitable-model fitness stalls at the penalty level") {
  // Coarsely sampled stiff dynamics under gap-frozen linearization: every
  // point in the box is penalized, so the local pass cannot converge.
  const StateSpaceModel model = fhn_model();
  ParamVec alpha_true(3);
  alpha_true << 1.0, 1.0, 0.1;
  Vec x0(2);
  x0 << -0.9323, -0.6732;
  RngStream data_stream(42, 0x8000000000000000ull);
  const Trajectory traj =
      simulate_path(model, alpha_true, x0, 0.0, 0.0005, 40000, data_stream);
  const auto states = subsample(traj, 0.5, 40);
  std::vector<double> times(41);
  for (int k = 0; k <= 40; ++k) times[k] = 0.5 * k;

  EstimationProblem problem;
  problem.model = model;
  problem.observations = generate_observations(model, states, times, data_stream);
  problem.box = default_box("fhn");
  problem.y0 = x0;
  problem.Q0 = 0.01 * Mat::Identity(2, 2);

  LocalConfig cfg;
  cfg.substeps = 16;  // keep the smoke test quick
  const EstimationResult res =
      local_minimize(problem, alpha_true, problem.box, cfg);
  CHECK(res.fitness == kPenaltyFitness);
  CHECK_FALSE(res.converged);
  CHECK(problem.box.contains(res.alpha_hat));
}
