#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sdefit/objective.hpp"
#include "sdefit/parallel.hpp"
#include "sdefit/rng.hpp"
#include "sdefit/umdac.hpp"

using namespace sdefit;

namespace {

std::vector<ParamVec> theta_grid(int n) {
  std::vector<ParamVec> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i)
    pts.push_back(ParamVec::Constant(1, 0.2 + 2.8 * i / (n - 1.0)));
  return pts;
}

}  // namespace

TEST_CASE("parallel evaluation is bitwise identical to the serial path") {
  oracles::OuProblem ou = oracles::make_ou_problem(321, 150);
  const ObjectiveFn fn = make_q_objective(ou.problem, 64);
  const auto pts = theta_grid(40);

  const std::vector<double> ref = evaluate_population_serial(pts, fn);
  REQUIRE(ref.size() == pts.size());
  for (int jobs : {1, 2, 4}) {
    CAPTURE(jobs);
    const std::vector<double> par = evaluate_population(pts, fn, jobs);
    REQUIRE(par.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(par[i] == ref[i]);
  }
}

TEST_CASE("oversubscription and empty input are harmless") {
  const ObjectiveFn fn = [](const ParamVec& x) { return x.squaredNorm(); };
  const auto pts = theta_grid(3);
  const auto ref = evaluate_population_serial(pts, fn);
  const auto par = evaluate_population(pts, fn, 16);  // jobs > population
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(par[i] == ref[i]);

  const std::vector<ParamVec> none;
  CHECK(evaluate_population(none, fn, 4).empty());
  CHECK(evaluate_population_serial(none, fn).empty());
}

TEST_CASE("job count does not change the minimizer output") {
  // All randomness lives outside the evaluation kernel, so any jobs value
  // must reproduce the single-thread run exactly, trace included.
  oracles::OuProblem ou = oracles::make_ou_problem(654, 120);
  UmdacConfig serial_cfg;
  serial_cfg.population = 16;
  serial_cfg.tau = 0.3;
  serial_cfg.elite_frac = 0.1;
  serial_cfg.generations = 8;
  serial_cfg.jobs = 1;
  UmdacConfig par_cfg = serial_cfg;
  par_cfg.jobs = 3;

  RngStream s1(2025, 1);
  const EstimationResult a = umdac_minimize(ou.problem, serial_cfg, s1);
  RngStream s2(2025, 1);
  const EstimationResult b = umdac_minimize(ou.problem, par_cfg, s2);

  CHECK(a.fitness == b.fitness);
  CHECK(a.evaluations == b.evaluations);
  CHECK((a.alpha_hat - b.alpha_hat).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t g = 0; g < a.trace.size(); ++g) {
    CHECK(a.trace[g].best_fitness == b.trace[g].best_fitness);
    CHECK(a.trace[g].mean_fitness == b.trace[g].mean_fitness);
    CHECK((a.trace[g].mu - b.trace[g].mu).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.trace[g].sigma - b.trace[g].sigma).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("a surrogate objective with uneven cost still lines up") {
  // Dynamic scheduling must not reorder results into the wrong slots.
  const ObjectiveFn fn = [](const ParamVec& x) {
    double acc = 0.0;
    const int spins = 1 + static_cast<int>(std::abs(x[0]) * 2000) % 5000;
    for (int i = 0; i < spins; ++i) acc += std::sin(i * x[0]);
    return x.squaredNorm() + 1e-18 * acc;
  };
  std::vector<ParamVec> pts;
  RngStream s(8, 0);
  for (int i = 0; i < 64; ++i)
    pts.push_back(ParamVec::Constant(1, s.uniform(-3.0, 3.0)));
  const auto ref = evaluate_population_serial(pts, fn);
  const auto par = evaluate_population(pts, fn, 4);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(par[i] == ref[i]);
}
