#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bobak/acquisition.hpp"
#include "bobak/benchmarks.hpp"
#include "bobak/optimizer.hpp"

namespace bobak::harness {

/// Strategy names accepted in configs: the four kernel strategies plus the random baseline.
const std::vector<std::string>& strategy_names();

struct ExperimentConfig {
  std::string setting = "ackley2d_near";
  std::vector<std::string> strategies{"se", "phi", "sum", "bak", "random"};
  int runs = 40;
  std::optional<int> budget;  // defaults to the setting's budget (80 in 2D, 100 in 10D)
  std::uint64_t base_seed = 0;
  AcquisitionConfig acquisition;
  double noise_variance = 1e-4;
  double p_alt = 0.5;
  std::vector<int> compare_at;  // iterations for pairwise verdicts; empty means the last one
  std::filesystem::path output;
  int jobs = 1;

  /// Throws ConfigError describing the first problem found.
  void validate() const;
  int effective_budget() const;
  /// Seed of run r (0-based): base_seed + r.
  std::uint64_t run_seed(int run) const { return base_seed + static_cast<std::uint64_t>(run); }
};

/// Reads a JSON config document. Unknown keys are rejected. Throws ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& config);

/// Kernel strategy with default starting hyperparameters (unit signal variance, lengthscales a
/// quarter of the input or warp range). Throws ConfigError for unknown names and for "random".
KernelStrategy make_strategy(const std::string& name, const ObjectiveSpec& objective, double p_alt);

struct AggregateCurve {
  std::string strategy;
  std::vector<double> mean;          // mean normalized best-so-far per iteration
  std::vector<double> ci_halfwidth;  // 1.96 * sample std / sqrt(runs)
  int runs = 0;
};

struct StrategyResult {
  std::string strategy;
  std::vector<RunTrace> traces;  // ordered by seed
  AggregateCurve curve;
  double wall_clock_seconds = 0.0;
};

struct ResultBundle {
  ExperimentConfig config;
  std::string setting;
  double normalization = 0.0;
  std::string version;
  std::vector<StrategyResult> results;  // in config order

  const StrategyResult& result(const std::string& strategy) const;
};

/// A single run failed; the bundle is abandoned.
class RunFailure : public std::runtime_error {
 public:
  RunFailure(const std::string& what, std::string strategy, std::uint64_t seed)
      : std::runtime_error(what), strategy_(std::move(strategy)), seed_(seed) {}
  const std::string& strategy() const noexcept { return strategy_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::string strategy_;
  std::uint64_t seed_;
};

/// Runs every (strategy, seed) pair on a pool of config.jobs workers, aggregates, and writes
/// the bundle to config.output when it is set.
ResultBundle run_experiment(const ExperimentConfig& config);

/// Normalized best-so-far curves averaged across traces. Throws InvalidArgument if empty or
/// if budgets differ.
AggregateCurve aggregate(const std::vector<RunTrace>& traces, double normalization);

enum class Verdict { ABetter, BBetter, Indistinguishable };
std::string to_string(Verdict v);

struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  double p_a_less = 0.5;  // one-sided p-value for H1: mean(a) < mean(b)
};

WelchResult welch_one_sided(const std::vector<double>& a, const std::vector<double>& b);

struct Comparison {
  std::string strategy_a;
  std::string strategy_b;
  int iteration = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_difference = 0.0;  // mean_a - mean_b
  double p_a_better = 0.5;
  double p_b_better = 0.5;
  Verdict verdict = Verdict::Indistinguishable;
};

inline constexpr double kSignificance = 0.05;

/// Welch test on normalized best-so-far at a 1-based iteration. Lower cost is better.
Comparison compare_strategies(const ResultBundle& bundle, const std::string& strategy_a,
                              const std::string& strategy_b, int iteration);

/// Values of normalized best-so-far at a 1-based iteration, one per run.
std::vector<double> normalized_best_at(const StrategyResult& result, double normalization, int iteration);

/// Writes trials.csv, curves.csv and summary.json into `dir` (created if missing).
void emit_csv(const ResultBundle& bundle, const std::filesystem::path& dir);

std::vector<AggregateCurve> read_curves_csv(const std::filesystem::path& path);

/// Pairwise comparisons at each configured iteration, in config order.
std::vector<Comparison> default_comparisons(const ResultBundle& bundle);

}  // namespace bobak::harness
