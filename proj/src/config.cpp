#include "sdefit/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sdefit/csv.hpp"
#include "sdefit/errors.hpp"

namespace sdefit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double cfg_double(const std::string& key, const std::string& value) {
  try {
    return parse_double(value);
  } catch (const IoError&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

long long cfg_int(const std::string& key, const std::string& value) {
  try {
    return parse_int(value);
  } catch (const IoError&) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

std::uint64_t cfg_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::uint64_t out = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an unsigned integer, got '" + value +
                      "'");
  }
}

ParamVec cfg_vector(const std::string& key, const std::string& value,
                    int expected) {
  std::vector<double> vals;
  try {
    vals = parse_double_list(value);
  } catch (const ConfigError&) {
    throw ConfigError(key + ": expected a comma-separated list, got '" +
                      value + "'");
  }
  if (expected > 0 && static_cast<int>(vals.size()) != expected)
    throw ConfigError(key + ": expected " + std::to_string(expected) +
                      " values, got " + std::to_string(vals.size()));
  ParamVec out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) out[i] = vals[i];
  return out;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) throw ConfigError("empty element in list: '" + text + "'");
    try {
      out.push_back(parse_double(t));
    } catch (const IoError&) {
      throw ConfigError("not a number in list: '" + t + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

KeyValueMap parse_config_text(const std::string& text) {
  KeyValueMap out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (out.count(key))
      throw ConfigError("duplicate key: " + key);
    out[key] = value;
  }
  return out;
}

KeyValueMap load_config_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open config: " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str());
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"model", "model name: fhn, mult, or ou (default fhn)"},
      {"model.alpha", "true parameters used to generate data (model default)"},
      {"model.x0", "initial state for simulation (model default)"},
      {"sim.h", "integration step for data generation (model default)"},
      {"sim.n_steps", "fine-grid steps (default obs.n * obs.delta / sim.h)"},
      {"sim.thin", "trajectory.csv row stride; 0 keeps files near 50k rows"},
      {"obs.delta", "sampling period between observations (default 0.5)"},
      {"obs.n", "observations after the first one (model default)"},
      {"box.lo", "lower parameter bounds (model default)"},
      {"box.hi", "upper parameter bounds (model default)"},
      {"filter.substeps", "integrator substeps per observation gap (64; fhn 256)"},
      {"filter.q0", "initial covariance scale, Q0 = q0 * I (0.01)"},
      {"filter.y0", "initial filter mean (default model.x0)"},
      {"filter.linearization", "jacobian refresh: gap (default) or substep"},
      {"algo", "estimator: umdac, refined, or loa (default umdac)"},
      {"umdac.population", "population size M (default 20 * p)"},
      {"umdac.tau", "truncation fraction (0.3)"},
      {"umdac.elite_frac", "elite fraction, count = ceil(frac * M) (0.05)"},
      {"umdac.generations", "generation budget G (50)"},
      {"umdac.early_stop_value", "optional fitness bound for early stop"},
      {"local.max_iters", "local search iteration cap (default 400 * p)"},
      {"local.x_tol", "simplex diameter tolerance (default 1e-6 * width)"},
      {"local.f_tol", "fitness spread tolerance (1e-8)"},
      {"reps", "repetitions for replicate (default 1)"},
      {"seed", "master seed, unsigned 64-bit (default 1)"},
      {"out", "output directory (default .)"},
      {"jobs", "parallel fitness evaluations (default 1)"},
      {"slice.coord", "1-based coordinate for fitness-slice (default 1)"},
      {"slice.grid", "grid points for fitness-slice (default 41)"},
      {"slice.center", "fixed coordinates for fitness-slice (see docs)"},
  };
  return keys;
}

ExperimentConfig build_experiment(const KeyValueMap& raw) {
  for (const auto& [key, value] : raw) {
    (void)value;
    const auto& known = config_keys();
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&key](const ConfigKey& k) { return k.name == key; });
    if (!ok) throw ConfigError("unknown config key: " + key);
  }
  auto get = [&raw](const std::string& key) -> std::optional<std::string> {
    const auto it = raw.find(key);
    if (it == raw.end()) return std::nullopt;
    return it->second;
  };

  ExperimentConfig cfg;
  if (const auto v = get("model")) cfg.model_name = *v;
  cfg.model = model_by_name(cfg.model_name);
  cfg.box = default_box(cfg.model_name);
  const int p = cfg.model.p;

  // Model-specific data-generation defaults. The excitable model sits near
  // a fold of its nullcline, so its moment ODEs need a finer integrator.
  if (cfg.model_name == "fhn") {
    cfg.sim_h = 0.0005;
    cfg.obs_n = 500;
    cfg.filter_substeps = 256;
    cfg.x0 = Vec(2);
    cfg.x0 << -0.9323, -0.6732;
  } else if (cfg.model_name == "mult") {
    cfg.sim_h = 0.005;
    cfg.obs_n = 500;
    cfg.x0 = Vec(2);
    cfg.x0 << 0.5, 0.5;
  } else {
    cfg.sim_h = 0.005;
    cfg.obs_n = 200;
    cfg.x0 = Vec(1);
    cfg.x0 << 0.5;
  }
  cfg.true_alpha = *cfg.box.true_values;

  if (const auto v = get("model.alpha"))
    cfg.true_alpha = cfg_vector("model.alpha", *v, p);
  if (const auto v = get("model.x0"))
    cfg.x0 = cfg_vector("model.x0", *v, cfg.model.d);
  if (const auto v = get("sim.h")) cfg.sim_h = cfg_double("sim.h", *v);
  if (const auto v = get("obs.delta"))
    cfg.obs_delta = cfg_double("obs.delta", *v);
  if (const auto v = get("obs.n"))
    cfg.obs_n = static_cast<long>(cfg_int("obs.n", *v));
  cfg.sim_n_steps = static_cast<long>(
      std::llround(static_cast<double>(cfg.obs_n) * cfg.obs_delta / cfg.sim_h));
  if (const auto v = get("sim.n_steps"))
    cfg.sim_n_steps = static_cast<long>(cfg_int("sim.n_steps", *v));
  if (const auto v = get("sim.thin"))
    cfg.sim_thin = static_cast<long>(cfg_int("sim.thin", *v));
  if (const auto v = get("box.lo")) cfg.box.lo = cfg_vector("box.lo", *v, p);
  if (const auto v = get("box.hi")) cfg.box.hi = cfg_vector("box.hi", *v, p);
  if (const auto v = get("filter.substeps"))
    cfg.filter_substeps = static_cast<int>(cfg_int("filter.substeps", *v));
  if (const auto v = get("filter.q0"))
    cfg.filter_q0 = cfg_double("filter.q0", *v);
  if (const auto v = get("filter.y0"))
    cfg.filter_y0 = cfg_vector("filter.y0", *v, cfg.model.d);
  if (const auto v = get("filter.linearization")) {
    if (*v == "substep") {
      cfg.filter_linearization = LinearizationUpdate::kEverySubstep;
    } else if (*v == "gap") {
      cfg.filter_linearization = LinearizationUpdate::kPerGap;
    } else {
      throw ConfigError("filter.linearization must be substep or gap, got '" +
                        *v + "'");
    }
  }
  if (const auto v = get("algo")) cfg.algo = *v;

  cfg.umdac.population = 20 * p;
  if (const auto v = get("umdac.population"))
    cfg.umdac.population = static_cast<int>(cfg_int("umdac.population", *v));
  if (const auto v = get("umdac.tau")) cfg.umdac.tau = cfg_double("umdac.tau", *v);
  if (const auto v = get("umdac.elite_frac"))
    cfg.umdac.elite_frac = cfg_double("umdac.elite_frac", *v);
  if (const auto v = get("umdac.generations"))
    cfg.umdac.generations = static_cast<int>(cfg_int("umdac.generations", *v));
  if (const auto v = get("umdac.early_stop_value"))
    cfg.umdac.early_stop_value = cfg_double("umdac.early_stop_value", *v);

  if (const auto v = get("local.max_iters"))
    cfg.local.max_iters = cfg_int("local.max_iters", *v);
  if (const auto v = get("local.x_tol"))
    cfg.local.x_tol = cfg_double("local.x_tol", *v);
  if (const auto v = get("local.f_tol"))
    cfg.local.f_tol = cfg_double("local.f_tol", *v);

  if (const auto v = get("reps"))
    cfg.reps = static_cast<int>(cfg_int("reps", *v));
  if (const auto v = get("seed")) cfg.seed = cfg_u64("seed", *v);
  if (const auto v = get("out")) cfg.out_dir = *v;
  if (const auto v = get("jobs"))
    cfg.jobs = static_cast<int>(cfg_int("jobs", *v));
  if (const auto v = get("slice.coord"))
    cfg.slice_coord = static_cast<int>(cfg_int("slice.coord", *v));
  if (const auto v = get("slice.grid"))
    cfg.slice_grid = static_cast<int>(cfg_int("slice.grid", *v));
  if (const auto v = get("slice.center"))
    cfg.slice_center = cfg_vector("slice.center", *v, p);

  cfg.umdac.substeps = cfg.filter_substeps;
  cfg.umdac.jobs = cfg.jobs;
  cfg.local.substeps = cfg.filter_substeps;

  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (algo != "umdac" && algo != "refined" && algo != "loa")
    throw ConfigError("algo must be umdac, refined, or loa, got '" + algo +
                      "'");
  if (!(sim_h > 0.0)) throw ConfigError("sim.h must be > 0");
  if (!(obs_delta > 0.0)) throw ConfigError("obs.delta must be > 0");
  if (obs_n < 0) throw ConfigError("obs.n must be >= 0");
  if (sim_n_steps < 0) throw ConfigError("sim.n_steps must be >= 0");
  if (sim_thin < 0) throw ConfigError("sim.thin must be >= 0");
  if (reps < 1) throw ConfigError("reps must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (filter_substeps < 1) throw ConfigError("filter.substeps must be >= 1");
  if (!(filter_q0 >= 0.0)) throw ConfigError("filter.q0 must be >= 0");
  if (slice_coord < 1 || slice_coord > model.p)
    throw ConfigError("slice.coord must be in [1, " + std::to_string(model.p) +
                      "]");
  if (slice_grid < 2) throw ConfigError("slice.grid must be >= 2");
  try {
    box.validate();
    if (static_cast<int>(box.size()) != model.p)
      throw std::invalid_argument("box size must equal parameter count");
    if (true_alpha.size() != model.p)
      throw std::invalid_argument("model.alpha size must equal parameter count");
    umdac.validate();
    local.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace sdefit
