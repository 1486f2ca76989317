// Times one population evaluation of the innovation fitness, serial vs
// OpenMP, and checks that both paths return bitwise-identical values.
#include <chrono>
#include <iostream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "sdefit/config.hpp"
#include "sdefit/experiment.hpp"
#include "sdefit/objective.hpp"
#include "sdefit/parallel.hpp"
#include "sdefit/umdac.hpp"

namespace {

double time_eval(const std::vector<sdefit::ParamVec>& pop,
                 const sdefit::ObjectiveFn& fn, int jobs, int rounds,
                 std::vector<double>& values) {
  double best = 1e300;
  for (int r = 0; r < rounds; ++r) {
    const auto start = std::chrono::steady_clock::now();
    values = sdefit::evaluate_population(pop, fn, jobs);
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (dt < best) best = dt;
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"population-evaluation benchmark: serial vs OpenMP"};
  int population = 64;
  long n_obs = 100;
  int jobs = 0;  // 0 = all hardware threads
  int rounds = 3;
  std::uint64_t seed = 1;
  app.add_option("--population", population, "candidates per evaluation");
  app.add_option("--obs", n_obs, "observations in the fitted series");
  app.add_option("--jobs", jobs, "parallel jobs (0 = hardware threads)");
  app.add_option("--rounds", rounds, "timing rounds, best-of");
  app.add_option("--seed", seed, "seed for data and candidates");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (jobs <= 0) jobs = omp_get_max_threads();
#else
  if (jobs <= 0) jobs = 1;
#endif

  sdefit::KeyValueMap raw;
  raw["model"] = "fhn";
  raw["obs.n"] = std::to_string(n_obs);
  raw["seed"] = std::to_string(seed);
  const sdefit::ExperimentConfig cfg = sdefit::build_experiment(raw);
  const sdefit::EstimationProblem problem =
      sdefit::make_problem(cfg, sdefit::make_data(cfg).observations);
  const sdefit::ObjectiveFn fn =
      sdefit::make_q_objective(problem, cfg.filter_substeps);

  sdefit::RngStream stream = sdefit::RngStream::create(seed, 0);
  const auto individuals =
      sdefit::init_population(cfg.box, population, stream);
  std::vector<sdefit::ParamVec> pop;
  pop.reserve(individuals.size());
  for (const auto& ind : individuals) pop.push_back(ind.x);

  std::vector<double> serial_vals, parallel_vals;
  const double t_serial = time_eval(pop, fn, 1, rounds, serial_vals);
  const double t_parallel = time_eval(pop, fn, jobs, rounds, parallel_vals);

  bool identical = serial_vals.size() == parallel_vals.size();
  for (std::size_t i = 0; identical && i < serial_vals.size(); ++i)
    identical = serial_vals[i] == parallel_vals[i];

  std::cout << "population = " << population << ", obs = " << n_obs
            << ", rounds = " << rounds << "\n";
  std::cout << "serial:   " << t_serial << " s\n";
  std::cout << "jobs=" << jobs << ":   " << t_parallel << " s\n";
  std::cout << "speedup:  " << t_serial / t_parallel << "\n";
  std::cout << "identical: " << (identical ? "yes" : "NO") << "\n";
  return identical ? 0 : 1;
}
