#include "bobak/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "bobak/errors.hpp"
#include "bobak/version.hpp"
#include "json.hpp"

namespace bobak::harness {
namespace {

using nlohmann::json;

constexpr double kZ95 = 1.96;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void apply_acquisition(const json& j, AcquisitionConfig& acq) {
  if (!j.is_object()) throw ConfigError("config key 'acquisition' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") {
      try {
        acq.kind = parse_acquisition_kind(value.get<std::string>());
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "beta") {
      acq.beta = get_as<double>(j, "beta");
    } else if (key == "candidates") {
      acq.candidate_count = get_as<int>(j, "candidates");
    } else if (key == "refine_steps") {
      acq.refine_steps = get_as<int>(j, "refine_steps");
    } else {
      throw ConfigError("unknown acquisition key '" + key + "'");
    }
  }
}

std::vector<double> column(const std::vector<std::vector<double>>& curves, std::size_t i) {
  std::vector<double> out;
  out.reserve(curves.size());
  for (const auto& c : curves) out.push_back(c[i]);
  return out;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // sample variance, 0 for a single value
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo == *hi) return {*lo, 0.0};  // exact, free of summation rounding
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    for (double x : v) m.variance += (x - m.mean) * (x - m.mean);
    m.variance /= static_cast<double>(v.size() - 1);
  }
  return m;
}

json comparison_json(const Comparison& c) {
  return json{{"a", c.strategy_a},
              {"b", c.strategy_b},
              {"iteration", c.iteration},
              {"mean_a", c.mean_a},
              {"mean_b", c.mean_b},
              {"mean_difference", c.mean_difference},
              {"p_a_better", c.p_a_better},
              {"p_b_better", c.p_b_better},
              {"verdict", to_string(c.verdict)}};
}

}  // namespace

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names{"se", "phi", "sum", "bak", "random"};
  return names;
}

void ExperimentConfig::validate() const {
  const auto& known = benchmarks::setting_names();
  if (std::find(known.begin(), known.end(), setting) == known.end()) {
    throw ConfigError("unknown setting '" + setting + "'");
  }
  if (strategies.empty()) throw ConfigError("at least one strategy is required");
  for (const auto& s : strategies) {
    const auto& names = strategy_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) throw ConfigError("unknown strategy '" + s + "'");
    if (std::count(strategies.begin(), strategies.end(), s) > 1) throw ConfigError("strategy '" + s + "' listed twice");
  }
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (budget && *budget < 1) throw ConfigError("budget must be at least 1");
  if (!(p_alt >= 0.0 && p_alt <= 1.0)) throw ConfigError("p_alt must lie in [0, 1]");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) throw ConfigError("noise must be finite and >= 0");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  try {
    acquisition.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  for (int it : compare_at) {
    if (it < 1 || it > effective_budget()) throw ConfigError("compare_at iteration " + std::to_string(it) + " out of range");
  }
}

int ExperimentConfig::effective_budget() const {
  if (budget) return *budget;
  try {
    return benchmarks::make_setting(setting).default_budget;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config document must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "setting") {
      c.setting = get_as<std::string>(j, "setting");
    } else if (key == "strategies") {
      c.strategies = get_as<std::vector<std::string>>(j, "strategies");
    } else if (key == "runs") {
      c.runs = get_as<int>(j, "runs");
    } else if (key == "budget") {
      if (value.is_null()) {
        c.budget.reset();
      } else {
        c.budget = get_as<int>(j, "budget");
      }
    } else if (key == "seed") {
      c.base_seed = get_as<std::uint64_t>(j, "seed");
    } else if (key == "p_alt") {
      c.p_alt = get_as<double>(j, "p_alt");
    } else if (key == "noise") {
      c.noise_variance = get_as<double>(j, "noise");
    } else if (key == "acquisition") {
      apply_acquisition(value, c.acquisition);
    } else if (key == "compare_at") {
      c.compare_at = get_as<std::vector<int>>(j, "compare_at");
    } else if (key == "out") {
      c.output = get_as<std::string>(j, "out");
    } else if (key == "jobs") {
      c.jobs = get_as<int>(j, "jobs");
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j{{"setting", c.setting},
         {"strategies", c.strategies},
         {"runs", c.runs},
         {"budget", c.effective_budget()},
         {"seed", c.base_seed},
         {"p_alt", c.p_alt},
         {"noise", c.noise_variance},
         {"acquisition",
          {{"kind", to_string(c.acquisition.kind)},
           {"beta", c.acquisition.beta},
           {"candidates", c.acquisition.candidate_count},
           {"refine_steps", c.acquisition.refine_steps}}},
         {"compare_at", c.compare_at},
         {"out", c.output.string()},
         {"jobs", c.jobs}};
  return j.dump(2);
}

KernelStrategy make_strategy(const std::string& name, const ObjectiveSpec& objective, double p_alt) {
  const HyperoptSpace space = hyperopt_space(objective);
  const KernelHyper raw{1.0, 0.25 * space.raw_widths};
  auto warped = [&] {
    if (!objective.warp) throw ConfigError("strategy '" + name + "' needs a warp; objective has none");
    return KernelHyper{1.0, 0.25 * space.warp_widths};
  };
  if (name == "se") return SeStrategy{raw};
  if (name == "phi") return WarpedStrategy{*objective.warp, warped()};
  if (name == "sum") return SumStrategy{raw, *objective.warp, warped()};
  if (name == "bak") return AlternationStrategy{p_alt, raw, *objective.warp, warped()};
  throw ConfigError("'" + name + "' is not a kernel strategy");
}

const StrategyResult& ResultBundle::result(const std::string& strategy) const {
  for (const auto& r : results) {
    if (r.strategy == strategy) return r;
  }
  throw InvalidArgument("strategy '" + strategy + "' is not in the bundle");
}

ResultBundle run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto setting = benchmarks::make_setting(config.setting);
  const ObjectiveSpec objective = setting.objective();
  const int budget = config.effective_budget();

  std::vector<std::optional<KernelStrategy>> kernels;
  for (const auto& name : config.strategies) {
    kernels.push_back(name == "random" ? std::nullopt
                                       : std::optional<KernelStrategy>(make_strategy(name, objective, config.p_alt)));
  }

  RunOptions options;
  options.noise_variance = config.noise_variance;

  const std::size_t n_items = config.strategies.size() * static_cast<std::size_t>(config.runs);
  std::vector<RunTrace> slots(n_items);
  std::vector<double> seconds(n_items, 0.0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::optional<RunFailure> failure;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_items) return;
      const std::size_t s = i / static_cast<std::size_t>(config.runs);
      const int r = static_cast<int>(i % static_cast<std::size_t>(config.runs));
      const std::uint64_t seed = config.run_seed(r);
      try {
        const auto t0 = std::chrono::steady_clock::now();
        slots[i] = kernels[s] ? run_bo(objective, *kernels[s], config.acquisition, budget, seed, options)
                              : run_random_search(objective, budget, seed);
        seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!failure) {
          failure.emplace("run of strategy '" + config.strategies[s] + "' with seed " + std::to_string(seed) +
                              " failed: " + e.what(),
                          config.strategies[s], seed);
        }
        failed = true;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int workers = std::min<int>(config.jobs, static_cast<int>(n_items));
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) throw *failure;

  ResultBundle bundle;
  bundle.config = config;
  bundle.setting = setting.name;
  bundle.normalization = benchmarks::normalization_constant(setting);
  bundle.version = kVersion;
  for (std::size_t s = 0; s < config.strategies.size(); ++s) {
    StrategyResult result;
    result.strategy = config.strategies[s];
    for (int r = 0; r < config.runs; ++r) {
      const std::size_t i = s * static_cast<std::size_t>(config.runs) + static_cast<std::size_t>(r);
      result.traces.push_back(std::move(slots[i]));
      result.wall_clock_seconds += seconds[i];
    }
    result.curve = aggregate(result.traces, bundle.normalization);
    bundle.results.push_back(std::move(result));
  }
  if (!config.output.empty()) emit_csv(bundle, config.output);
  return bundle;
}

AggregateCurve aggregate(const std::vector<RunTrace>& traces, double normalization) {
  if (traces.empty()) throw InvalidArgument("cannot aggregate zero traces");
  const std::size_t budget = traces.front().records.size();
  std::vector<std::vector<double>> curves;
  for (const auto& t : traces) {
    if (t.records.size() != budget) throw InvalidArgument("traces have different budgets");
    if (t.strategy != traces.front().strategy) throw InvalidArgument("traces mix strategies");
    auto c = best_so_far_curve(t);
    for (double& v : c) v = benchmarks::normalized_cost(v, normalization);
    curves.push_back(std::move(c));
  }
  AggregateCurve out;
  out.strategy = traces.front().strategy;
  out.runs = static_cast<int>(traces.size());
  const double root_n = std::sqrt(static_cast<double>(traces.size()));
  for (std::size_t i = 0; i < budget; ++i) {
    const Moments m = moments(column(curves, i));
    out.mean.push_back(m.mean);
    out.ci_halfwidth.push_back(kZ95 * std::sqrt(m.variance) / root_n);
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ABetter: return "a_better";
    case Verdict::BBetter: return "b_better";
    case Verdict::Indistinguishable: return "indistinguishable";
  }
  return "?";
}

WelchResult welch_one_sided(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("Welch test needs nonempty samples");
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = ma.variance / na;
  const double vb = mb.variance / nb;
  const double diff = ma.mean - mb.mean;
  WelchResult r;
  if (va + vb == 0.0) {
    r.t = diff < 0 ? -std::numeric_limits<double>::infinity()
                   : (diff > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    r.dof = na + nb - 2.0;
    r.p_a_less = diff < 0 ? 0.0 : (diff > 0 ? 1.0 : 0.5);
    return r;
  }
  r.t = diff / std::sqrt(va + vb);
  const double da = a.size() > 1 ? va * va / (na - 1.0) : 0.0;
  const double db = b.size() > 1 ? vb * vb / (nb - 1.0) : 0.0;
  r.dof = (va + vb) * (va + vb) / (da + db);
  boost::math::students_t dist(r.dof);
  r.p_a_less = boost::math::cdf(dist, r.t);
  return r;
}

std::vector<double> normalized_best_at(const StrategyResult& result, double normalization, int iteration) {
  std::vector<double> out;
  for (const auto& t : result.traces) {
    if (iteration < 1 || static_cast<std::size_t>(iteration) > t.records.size()) {
      throw InvalidArgument("iteration " + std::to_string(iteration) + " is outside 1.." +
                            std::to_string(t.records.size()));
    }
    out.push_back(benchmarks::normalized_cost(t.records[static_cast<std::size_t>(iteration - 1)].best_so_far,
                                              normalization));
  }
  return out;
}

Comparison compare_strategies(const ResultBundle& bundle, const std::string& strategy_a,
                              const std::string& strategy_b, int iteration) {
  const auto a = normalized_best_at(bundle.result(strategy_a), bundle.normalization, iteration);
  const auto b = normalized_best_at(bundle.result(strategy_b), bundle.normalization, iteration);
  const WelchResult w = welch_one_sided(a, b);
  Comparison c;
  c.strategy_a = strategy_a;
  c.strategy_b = strategy_b;
  c.iteration = iteration;
  c.mean_a = moments(a).mean;
  c.mean_b = moments(b).mean;
  c.mean_difference = c.mean_a - c.mean_b;
  c.p_a_better = w.p_a_less;
  c.p_b_better = 1.0 - w.p_a_less;
  if (c.p_a_better < kSignificance) {
    c.verdict = Verdict::ABetter;
  } else if (c.p_b_better < kSignificance) {
    c.verdict = Verdict::BBetter;
  }
  return c;
}

std::vector<Comparison> default_comparisons(const ResultBundle& bundle) {
  std::vector<int> iterations = bundle.config.compare_at;
  if (iterations.empty()) iterations.push_back(bundle.config.effective_budget());
  std::vector<Comparison> out;
  for (int it : iterations) {
    for (std::size_t i = 0; i < bundle.results.size(); ++i) {
      for (std::size_t j = i + 1; j < bundle.results.size(); ++j) {
        out.push_back(compare_strategies(bundle, bundle.results[i].strategy, bundle.results[j].strategy, it));
      }
    }
  }
  return out;
}

void emit_csv(const ResultBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };

  {
    auto out = open("trials.csv");
    const Eigen::Index d = bundle.results.empty() || bundle.results.front().traces.empty()
                               ? 0
                               : bundle.results.front().traces.front().records.front().x.size();
    out << "run_seed,strategy,iteration,kernel_label,theta";
    for (Eigen::Index i = 0; i < d; ++i) out << ",x_" << i;
    out << ",y,best_so_far\n";
    for (const auto& result : bundle.results) {
      for (const auto& trace : result.traces) {
        for (const auto& r : trace.records) {
          out << trace.seed << ',' << result.strategy << ',' << r.iteration << ',' << to_string(r.label) << ','
              << (r.theta ? fmt17(*r.theta) : "");
          for (double xi : r.x) out << ',' << fmt17(xi);
          out << ',' << fmt17(r.y) << ',' << fmt17(r.best_so_far) << '\n';
        }
      }
    }
  }
  {
    auto out = open("curves.csv");
    out << "strategy,iteration,mean,ci_halfwidth,n_runs\n";
    for (const auto& result : bundle.results) {
      const auto& c = result.curve;
      for (std::size_t i = 0; i < c.mean.size(); ++i) {
        out << c.strategy << ',' << i + 1 << ',' << fmt17(c.mean[i]) << ',' << fmt17(c.ci_halfwidth[i]) << ','
            << c.runs << '\n';
      }
    }
  }
  {
    json summary;
    summary["config"] = json::parse(config_to_json(bundle.config));
    summary["setting"] = bundle.setting;
    summary["normalization"] = {{"y_max", bundle.normalization},
                                {"samples", benchmarks::kNormalizationSamples},
                                {"seed", benchmarks::kNormalizationSeed}};
    summary["version"] = bundle.version;
    json timing = json::object();
    for (const auto& r : bundle.results) timing[r.strategy] = r.wall_clock_seconds;
    summary["wall_clock_seconds"] = timing;
    json comparisons = json::array();
    for (const auto& c : default_comparisons(bundle)) comparisons.push_back(comparison_json(c));
    summary["comparisons"] = comparisons;
    auto out = open("summary.json");
    out << summary.dump(2) << '\n';
  }
}

std::vector<AggregateCurve> read_curves_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "strategy,iteration,mean,ci_halfwidth,n_runs") throw std::runtime_error("unexpected curves.csv header");
  std::vector<AggregateCurve> curves;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 5) throw std::runtime_error("malformed curves.csv row: " + line);
    if (curves.empty() || curves.back().strategy != f[0]) curves.push_back(AggregateCurve{f[0], {}, {}, 0});
    auto& c = curves.back();
    c.mean.push_back(std::strtod(f[2].c_str(), nullptr));
    c.ci_halfwidth.push_back(std::strtod(f[3].c_str(), nullptr));
    c.runs = std::stoi(f[4]);
  }
  return curves;
}

}  // namespace bobak::harness
