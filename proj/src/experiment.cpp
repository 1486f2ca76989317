#include "sdefit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "sdefit/csv.hpp"
#include "sdefit/errors.hpp"
#include "sdefit/llfilter.hpp"
#include "sdefit/local_opt.hpp"
#include "sdefit/objective.hpp"

namespace sdefit {

namespace {

namespace fs = std::filesystem;

constexpr int kHistogramBins = 20;
constexpr long kTrajectoryRowTarget = 50000;

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

void ensure_out_dir(const ExperimentConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + cfg.out_dir);
}

std::vector<double> observation_times(const ExperimentConfig& cfg) {
  std::vector<double> times(cfg.obs_n + 1);
  for (long k = 0; k <= cfg.obs_n; ++k)
    times[k] = static_cast<double>(k) * cfg.obs_delta;
  return times;
}

CsvTable estimate_table(const ExperimentConfig& cfg,
                        const std::vector<EstimationResult>& results,
                        bool with_rep) {
  CsvTable t;
  if (with_rep) t.header.push_back("rep");
  t.header.insert(t.header.end(), {"algorithm", "seed"});
  for (int i = 0; i < cfg.model.p; ++i)
    t.header.push_back("alpha_" + std::to_string(i + 1));
  t.header.insert(t.header.end(),
                  {"fitness", "evaluations", "wall_time", "converged"});
  for (std::size_t r = 0; r < results.size(); ++r) {
    const auto& res = results[r];
    std::vector<std::string> row;
    if (with_rep) row.push_back(format_int(static_cast<long long>(r)));
    row.push_back(res.algorithm);
    row.push_back(std::to_string(cfg.seed));
    for (int i = 0; i < cfg.model.p; ++i)
      row.push_back(format_double(res.alpha_hat[i]));
    row.push_back(format_double(res.fitness));
    row.push_back(format_int(res.evaluations));
    row.push_back(format_double(res.wall_time_s));
    row.push_back(res.converged ? "1" : "0");
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_trace(const ExperimentConfig& cfg, const EstimationResult& res,
                 const std::string& name) {
  if (res.trace.empty()) return;
  CsvTable t;
  t.header = {"generation", "best_fitness", "mean_fitness"};
  for (int i = 0; i < cfg.model.p; ++i)
    t.header.push_back("mu_" + std::to_string(i + 1));
  for (int i = 0; i < cfg.model.p; ++i)
    t.header.push_back("sigma_" + std::to_string(i + 1));
  for (const auto& g : res.trace) {
    std::vector<std::string> row = {format_int(g.generation),
                                    format_double(g.best_fitness),
                                    format_double(g.mean_fitness)};
    for (int i = 0; i < cfg.model.p; ++i)
      row.push_back(format_double(g.mu[i]));
    for (int i = 0; i < cfg.model.p; ++i)
      row.push_back(format_double(g.sigma[i]));
    t.rows.push_back(std::move(row));
  }
  write_csv(out_path(cfg, name), t);
}

}  // namespace

SimulatedData make_data(const ExperimentConfig& cfg) {
  RngStream stream = RngStream::create(cfg.seed, kDataStreamId);
  SimulatedData data;
  data.trajectory = simulate_path(cfg.model, cfg.true_alpha, cfg.x0, 0.0,
                                  cfg.sim_h, cfg.sim_n_steps, stream);
  const auto times = observation_times(cfg);
  const auto states = subsample(data.trajectory, cfg.obs_delta, cfg.obs_n);
  data.observations = generate_observations(cfg.model, states, times, stream);
  return data;
}

ObservationSeries load_or_make_observations(const ExperimentConfig& cfg) {
  const std::string path = out_path(cfg, "observations.csv");
  if (!fs::exists(path)) return make_data(cfg).observations;

  const CsvTable t = read_csv(path);
  if (t.column("t") != 0)
    throw IoError("observations.csv: first column must be t");
  ObservationSeries obs;
  for (std::size_t row = 0; row < t.rows.size(); ++row) {
    obs.times.push_back(t.value(row, "t"));
    Vec z(cfg.model.r);
    for (int i = 0; i < cfg.model.r; ++i)
      z[i] = t.value(row, "z" + std::to_string(i + 1));
    obs.values.push_back(std::move(z));
  }
  obs.validate();
  return obs;
}

EstimationProblem make_problem(const ExperimentConfig& cfg,
                               ObservationSeries observations) {
  EstimationProblem problem;
  problem.model = cfg.model;
  problem.observations = std::move(observations);
  problem.box = cfg.box;
  problem.y0 = cfg.filter_y0 ? *cfg.filter_y0 : cfg.x0;
  problem.Q0 = cfg.filter_q0 * Mat::Identity(cfg.model.d, cfg.model.d);
  problem.linearization = cfg.filter_linearization;
  problem.validate();
  return problem;
}

EstimationResult run_one(const ExperimentConfig& cfg,
                         const EstimationProblem& problem, int rep) {
  RngStream stream = RngStream::create(cfg.seed, static_cast<std::uint64_t>(rep));
  if (cfg.algo == "umdac") return umdac_minimize(problem, cfg.umdac, stream);
  if (cfg.algo == "refined")
    return refined_estimate(problem, cfg.umdac, cfg.local, stream);
  ParamVec x0(cfg.model.p);
  for (int i = 0; i < cfg.model.p; ++i)
    x0[i] = stream.uniform(cfg.box.lo[i], cfg.box.hi[i]);
  EstimationResult res = local_minimize(problem, x0, cfg.box, cfg.local);
  res.algorithm = "loa";
  return res;
}

void cmd_simulate(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg);
  const SimulatedData data = make_data(cfg);

  const long rows = static_cast<long>(data.trajectory.states.size());
  long thin = cfg.sim_thin;
  if (thin == 0) thin = std::max(1L, (rows + kTrajectoryRowTarget - 1) /
                                         kTrajectoryRowTarget);
  CsvTable traj;
  traj.header = {"t"};
  for (int i = 0; i < cfg.model.d; ++i)
    traj.header.push_back("x" + std::to_string(i + 1));
  for (long j = 0; j < rows; j += thin) {
    std::vector<std::string> row = {format_double(data.trajectory.time_at(j))};
    for (int i = 0; i < cfg.model.d; ++i)
      row.push_back(format_double(data.trajectory.states[j][i]));
    traj.rows.push_back(std::move(row));
  }
  write_csv(out_path(cfg, "trajectory.csv"), traj);

  CsvTable obs;
  obs.header = {"t"};
  for (int i = 0; i < cfg.model.r; ++i)
    obs.header.push_back("z" + std::to_string(i + 1));
  for (std::size_t k = 0; k < data.observations.count(); ++k) {
    std::vector<std::string> row = {format_double(data.observations.times[k])};
    for (int i = 0; i < cfg.model.r; ++i)
      row.push_back(format_double(data.observations.values[k][i]));
    obs.rows.push_back(std::move(row));
  }
  write_csv(out_path(cfg, "observations.csv"), obs);
  std::cout << "seed = " << cfg.seed << "\n";
}

void cmd_estimate(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg);
  const EstimationProblem problem =
      make_problem(cfg, load_or_make_observations(cfg));
  const EstimationResult res = run_one(cfg, problem, 0);
  write_csv(out_path(cfg, "estimate.csv"), estimate_table(cfg, {res}, false));
  write_trace(cfg, res, "trace.csv");
  std::cout << "seed = " << cfg.seed << "\n";
  std::cout << "fitness = " << format_double(res.fitness) << "\n";
}

ReplicationSummary cmd_replicate(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg);
  const EstimationProblem problem =
      make_problem(cfg, load_or_make_observations(cfg));

  ReplicationSummary summary;
  summary.runs.resize(cfg.reps);
  for (int r = 0; r < cfg.reps; ++r)
    summary.runs[r] = run_one(cfg, problem, r);

  const int p = cfg.model.p;
  summary.min = ParamVec::Constant(p, std::numeric_limits<double>::quiet_NaN());
  summary.max = summary.min;
  summary.mean = summary.min;
  summary.std_dev = summary.min;

  std::vector<const EstimationResult*> ok_runs;
  for (const auto& run : summary.runs) {
    summary.total_runtime_s += run.wall_time_s;
    if (run.converged) ok_runs.push_back(&run);
    else ++summary.failures;
  }
  if (!ok_runs.empty()) {
    const double n = static_cast<double>(ok_runs.size());
    summary.min = ok_runs.front()->alpha_hat;
    summary.max = ok_runs.front()->alpha_hat;
    summary.mean = ParamVec::Zero(p);
    for (const auto* run : ok_runs) {
      summary.min = summary.min.cwiseMin(run->alpha_hat);
      summary.max = summary.max.cwiseMax(run->alpha_hat);
      summary.mean += run->alpha_hat;
    }
    summary.mean /= n;
    ParamVec ss = ParamVec::Zero(p);
    for (const auto* run : ok_runs) {
      const ParamVec d = run->alpha_hat - summary.mean;
      ss += d.cwiseProduct(d);
    }
    summary.std_dev = (ss / n).cwiseSqrt();
  }

  write_csv(out_path(cfg, "runs.csv"),
            estimate_table(cfg, summary.runs, true));

  CsvTable sum;
  sum.header = {"parameter", "min", "max", "mean", "std", "failures"};
  for (int i = 0; i < p; ++i) {
    sum.rows.push_back({"alpha_" + std::to_string(i + 1),
                        format_double(summary.min[i]),
                        format_double(summary.max[i]),
                        format_double(summary.mean[i]),
                        format_double(summary.std_dev[i]),
                        format_int(summary.failures)});
  }
  write_csv(out_path(cfg, "summary.csv"), sum);

  CsvTable hist;
  hist.header = {"parameter", "bin_lo", "bin_hi", "count"};
  for (int i = 0; i < p; ++i) {
    const double lo = cfg.box.lo[i];
    const double width = cfg.box.width(i) / kHistogramBins;
    std::vector<long> counts(kHistogramBins, 0);
    for (const auto* run : ok_runs) {
      const double v = run->alpha_hat[i];
      int bin = width > 0.0
                    ? static_cast<int>(std::floor((v - lo) / width))
                    : 0;
      bin = std::clamp(bin, 0, kHistogramBins - 1);
      ++counts[bin];
    }
    for (int b = 0; b < kHistogramBins; ++b) {
      hist.rows.push_back({"alpha_" + std::to_string(i + 1),
                           format_double(lo + b * width),
                           format_double(lo + (b + 1) * width),
                           format_int(counts[b])});
    }
  }
  write_csv(out_path(cfg, "histograms.csv"), hist);

  std::cout << "seed = " << cfg.seed << "\n";
  std::cout << "failures = " << summary.failures << "\n";
  std::cout << "runtime_s = " << format_double(summary.total_runtime_s)
            << "\n";
  return summary;
}

void cmd_filter(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg);
  const EstimationProblem problem =
      make_problem(cfg, load_or_make_observations(cfg));
  const FilterRun run =
      run_filter(problem, cfg.true_alpha, cfg.filter_substeps);

  CsvTable t;
  t.header = {"t"};
  for (int i = 0; i < cfg.model.r; ++i)
    t.header.push_back("nu_" + std::to_string(i + 1));
  for (int i = 0; i < cfg.model.r; ++i)
    t.header.push_back("s_" + std::to_string(i + 1));
  for (int i = 0; i < cfg.model.d; ++i)
    t.header.push_back("y_" + std::to_string(i + 1));
  for (std::size_t k = 0; k < run.innovations.size(); ++k) {
    std::vector<std::string> row = {
        format_double(problem.observations.times[k + 1])};
    for (int i = 0; i < cfg.model.r; ++i)
      row.push_back(format_double(run.innovations[k][i]));
    for (int i = 0; i < cfg.model.r; ++i)
      row.push_back(format_double(run.innovation_covs[k](i, i)));
    for (int i = 0; i < cfg.model.d; ++i)
      row.push_back(format_double(run.filtered_means[k][i]));
    t.rows.push_back(std::move(row));
  }
  write_csv(out_path(cfg, "filter.csv"), t);

  std::cout << "seed = " << cfg.seed << "\n";
  std::cout << "status = " << (run.ok() ? "ok" : "penalized") << "\n";
  std::cout << "fitness = " << format_double(run.fitness) << "\n";
  if (!run.ok()) std::cout << "reason = " << run.penalty_reason << "\n";
}

void cmd_fitness_slice(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg);
  const EstimationProblem problem =
      make_problem(cfg, load_or_make_observations(cfg));
  const int coord = cfg.slice_coord - 1;

  // Center precedence: explicit config, then a prior replicate's mean,
  // then the true parameters.
  ParamVec center = cfg.true_alpha;
  if (cfg.slice_center) {
    center = *cfg.slice_center;
  } else if (fs::exists(out_path(cfg, "summary.csv"))) {
    const CsvTable sum = read_csv(out_path(cfg, "summary.csv"));
    if (static_cast<int>(sum.rows.size()) != cfg.model.p)
      throw IoError("summary.csv: expected one row per parameter");
    for (int i = 0; i < cfg.model.p; ++i) center[i] = sum.value(i, "mean");
  }

  CsvTable t;
  t.header = {"alpha", "q"};
  const double lo = cfg.box.lo[coord];
  const double hi = cfg.box.hi[coord];
  for (int j = 0; j < cfg.slice_grid; ++j) {
    ParamVec alpha = center;
    alpha[coord] =
        lo + (hi - lo) * static_cast<double>(j) /
                 static_cast<double>(cfg.slice_grid - 1);
    const double q = q_fitness(problem, alpha, cfg.filter_substeps).value;
    t.rows.push_back({format_double(alpha[coord]), format_double(q)});
  }
  write_csv(
      out_path(cfg, "slice_" + std::to_string(cfg.slice_coord) + ".csv"), t);
  std::cout << "seed = " << cfg.seed << "\n";
}

}  // namespace sdefit
