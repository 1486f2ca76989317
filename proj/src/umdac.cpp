#include "sdefit/umdac.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sdefit/parallel.hpp"

namespace sdefit {

namespace {

constexpr double kSigmaFloorScale = 1e-9;
constexpr int kMaxRejections = 100;

double sample_coordinate(double mu, double sigma, double lo, double hi,
                         RngStream& s) {
  double draw = mu;
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    draw = s.normal(mu, sigma);
    if (draw >= lo && draw <= hi) return draw;
  }
  return std::clamp(draw, lo, hi);
}

}  // namespace

int UmdacConfig::selected_count() const {
  return static_cast<int>(std::floor(tau * population));
}

int UmdacConfig::elite_count() const {
  return static_cast<int>(std::ceil(elite_frac * population));
}

void UmdacConfig::validate() const {
  if (population < 2) throw std::invalid_argument("umdac: population must be >= 2");
  if (!(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("umdac: tau must be in (0, 1]");
  if (!(elite_frac >= 0.0 && elite_frac < 1.0))
    throw std::invalid_argument("umdac: elite_frac must be in [0, 1)");
  if (generations < 1)
    throw std::invalid_argument("umdac: generations must be >= 1");
  if (selected_count() < 2)
    throw std::invalid_argument("umdac: floor(tau * population) must be >= 2");
  if (substeps < 1) throw std::invalid_argument("umdac: substeps must be >= 1");
}

std::vector<Individual> init_population(const ParameterBox& box, int M,
                                        RngStream& s) {
  if (M < 2) throw std::invalid_argument("init_population: M must be >= 2");
  const int p = box.size();
  std::vector<Individual> pop(M);
  for (auto& ind : pop) {
    ind.x.resize(p);
    for (int i = 0; i < p; ++i) ind.x[i] = s.uniform(box.lo[i], box.hi[i]);
  }
  return pop;
}

std::vector<Individual> truncation_select(const std::vector<Individual>& pop,
                                          double tau) {
  const int n_sel =
      static_cast<int>(std::floor(tau * static_cast<double>(pop.size())));
  if (n_sel < 1 || n_sel > static_cast<int>(pop.size()))
    throw std::invalid_argument("truncation_select: bad selection count");
  for (const auto& ind : pop)
    if (!ind.evaluated())
      throw std::logic_error("truncation_select: unevaluated individual");

  std::vector<int> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&pop](int a, int b) {
    return pop[a].fitness < pop[b].fitness;
  });
  std::vector<Individual> selected;
  selected.reserve(n_sel);
  for (int i = 0; i < n_sel; ++i) selected.push_back(pop[order[i]]);
  return selected;
}

GaussianMarginals fit_marginals(const std::vector<Individual>& selected,
                                const ParameterBox& box) {
  if (selected.size() < 2)
    throw std::invalid_argument("fit_marginals: needs at least 2 points");
  const int p = box.size();
  const double n = static_cast<double>(selected.size());
  const double floor_sigma = kSigmaFloorScale * box.max_width();

  GaussianMarginals m;
  m.mu = ParamVec::Zero(p);
  m.sigma = ParamVec::Zero(p);
  for (const auto& ind : selected) m.mu += ind.x;
  m.mu /= n;
  for (const auto& ind : selected)
    m.sigma += (ind.x - m.mu).cwiseProduct(ind.x - m.mu);
  m.sigma = (m.sigma / n).cwiseSqrt().cwiseMax(floor_sigma);
  return m;
}

std::vector<Individual> sample_population(const GaussianMarginals& marginals,
                                          const ParameterBox& box, int n,
                                          RngStream& s) {
  if (n < 0) throw std::invalid_argument("sample_population: n must be >= 0");
  const int p = box.size();
  std::vector<Individual> pop(n);
  for (auto& ind : pop) {
    ind.x.resize(p);
    for (int i = 0; i < p; ++i)
      ind.x[i] = sample_coordinate(marginals.mu[i], marginals.sigma[i],
                                   box.lo[i], box.hi[i], s);
  }
  return pop;
}

EstimationResult umdac_minimize(const ObjectiveFn& fn, const ParameterBox& box,
                                const UmdacConfig& config, RngStream& s) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const int M = config.population;
  const int n_elite = config.elite_count();

  EstimationResult result;
  result.algorithm = "umdac";
  result.trace.reserve(config.generations);

  std::vector<Individual> pop = init_population(box, M, s);
  Individual best;

  for (int gen = 0; gen < config.generations; ++gen) {
    // Elites carried over already hold their fitness; evaluate the rest.
    std::vector<ParamVec> fresh;
    std::vector<int> fresh_idx;
    for (int i = 0; i < M; ++i) {
      if (!pop[i].evaluated()) {
        fresh.push_back(pop[i].x);
        fresh_idx.push_back(i);
      }
    }
    const std::vector<double> values =
        evaluate_population(fresh, fn, config.jobs);
    for (std::size_t j = 0; j < fresh_idx.size(); ++j) {
      pop[fresh_idx[j]].fitness = values[j];
      pop[fresh_idx[j]].penalized = values[j] >= kPenaltyFitness;
    }
    result.evaluations += static_cast<long>(fresh.size());

    double mean = 0.0;
    int best_i = 0;
    for (int i = 0; i < M; ++i) {
      mean += pop[i].fitness;
      if (pop[i].fitness < pop[best_i].fitness) best_i = i;
    }
    mean /= static_cast<double>(M);
    if (!best.evaluated() || pop[best_i].fitness < best.fitness)
      best = pop[best_i];

    const std::vector<Individual> selected = truncation_select(pop, config.tau);
    const GaussianMarginals marginals = fit_marginals(selected, box);

    GenerationStats stats;
    stats.generation = gen;
    stats.best_fitness = pop[best_i].fitness;
    stats.mean_fitness = mean;
    stats.best_x = pop[best_i].x;
    stats.mu = marginals.mu;
    stats.sigma = marginals.sigma;
    result.trace.push_back(std::move(stats));

    if (config.early_stop_value && best.fitness < *config.early_stop_value)
      break;
    if (gen + 1 == config.generations) break;

    // Next generation: the n_elite best kept as-is, the rest resampled.
    std::vector<Individual> next = truncation_select(pop, 1.0);
    next.resize(n_elite);
    std::vector<Individual> sampled =
        sample_population(marginals, box, M - n_elite, s);
    for (auto& ind : sampled) next.push_back(std::move(ind));
    pop = std::move(next);
  }

  result.alpha_hat = best.x;
  result.fitness = best.fitness;
  result.converged = best.fitness < kPenaltyFitness;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

EstimationResult umdac_minimize(const EstimationProblem& problem,
                                const UmdacConfig& config, RngStream& s) {
  return umdac_minimize(make_q_objective(problem, config.substeps),
                        problem.box, config, s);
}

}  // namespace sdefit
