// bobak: run the synthetic BO comparison study from the command line.
//
//   bobak run --setting ackley2d_far --strategies se,phi,bak,random --runs 40 --out results/
//   bobak settings

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bobak/benchmarks.hpp"
#include "bobak/errors.hpp"
#include "bobak/harness.hpp"
#include "bobak/version.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct RunFlags {
  std::string config;
  std::optional<std::string> setting;
  std::optional<std::string> strategies;
  std::optional<int> runs;
  std::optional<int> budget;
  std::optional<std::uint64_t> seed;
  std::optional<double> p_alt;
  std::optional<std::string> acq;
  std::optional<double> beta;
  std::optional<double> noise;
  std::optional<int> candidates;
  std::optional<int> refine_steps;
  std::optional<std::string> compare_at;
  std::optional<std::string> out;
  std::optional<int> jobs;
};

bobak::harness::ExperimentConfig build_config(const RunFlags& f) {
  bobak::harness::ExperimentConfig c;
  if (!f.config.empty()) c = bobak::harness::load_config(f.config);
  if (f.setting) c.setting = *f.setting;
  if (f.strategies) c.strategies = split_list(*f.strategies);
  if (f.runs) c.runs = *f.runs;
  if (f.budget) c.budget = *f.budget;
  if (f.seed) c.base_seed = *f.seed;
  if (f.p_alt) c.p_alt = *f.p_alt;
  if (f.acq) {
    try {
      c.acquisition.kind = bobak::parse_acquisition_kind(*f.acq);
    } catch (const bobak::InvalidArgument& e) {
      throw bobak::ConfigError(e.what());
    }
  }
  if (f.beta) c.acquisition.beta = *f.beta;
  if (f.noise) c.noise_variance = *f.noise;
  if (f.candidates) c.acquisition.candidate_count = *f.candidates;
  if (f.refine_steps) c.acquisition.refine_steps = *f.refine_steps;
  if (f.compare_at) {
    c.compare_at.clear();
    for (const auto& s : split_list(*f.compare_at)) {
      try {
        c.compare_at.push_back(std::stoi(s));
      } catch (const std::exception&) {
        throw bobak::ConfigError("--compare-at expects integers, got '" + s + "'");
      }
    }
  }
  if (f.out) c.output = *f.out;
  if (f.jobs) c.jobs = *f.jobs;
  return c;
}

void print_summary(const bobak::harness::ResultBundle& bundle) {
  std::printf("setting %s  (y_max %.6g, %d runs)\n", bundle.setting.c_str(), bundle.normalization,
              bundle.config.runs);
  for (const auto& r : bundle.results) {
    std::printf("  %-7s final mean %.4f +- %.4f   (%.1fs)\n", r.strategy.c_str(), r.curve.mean.back(),
                r.curve.ci_halfwidth.back(), r.wall_clock_seconds);
  }
  for (const auto& c : bobak::harness::default_comparisons(bundle)) {
    std::printf("  @%-4d %-7s vs %-7s  diff %+.4f  p(a<b) %.4g  %s\n", c.iteration, c.strategy_a.c_str(),
                c.strategy_b.c_str(), c.mean_difference, c.p_a_better, to_string(c.verdict).c_str());
  }
}

int run_command(const RunFlags& flags) {
  bobak::harness::ExperimentConfig base;
  std::vector<bobak::harness::ExperimentConfig> configs;
  try {
    base = build_config(flags);
    const auto settings = split_list(base.setting);
    if (settings.empty()) throw bobak::ConfigError("no setting given");
    for (const auto& s : settings) {
      auto c = base;
      c.setting = s;
      if (settings.size() > 1 && !c.output.empty()) c.output /= s;
      c.validate();
      configs.push_back(std::move(c));
    }
  } catch (const bobak::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    for (const auto& c : configs) print_summary(bobak::harness::run_experiment(c));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

int settings_command() {
  for (const auto& name : bobak::benchmarks::setting_names()) {
    const auto s = bobak::benchmarks::make_setting(name);
    std::printf("%-14s d=%-3ld [%g, %g]  budget %d  y_max %.6g\n", name.c_str(), static_cast<long>(s.dimension),
                s.domain.lower()(0), s.domain.upper()(0), s.default_budget,
                bobak::benchmarks::normalization_constant(s));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian optimization with informed and alternating kernels"};
  app.set_version_flag("--version", std::string(bobak::kVersion));
  app.require_subcommand(1);

  RunFlags flags;
  auto* run = app.add_subcommand("run", "Run a strategy x setting sweep and write CSV results");
  run->add_option("--config", flags.config, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  run->add_option("--setting", flags.setting, "Setting name(s), comma separated");
  run->add_option("--strategies", flags.strategies, "Comma list from se,phi,sum,bak,random");
  run->add_option("--runs", flags.runs, "Repetitions per strategy");
  run->add_option("--budget", flags.budget, "Trials per run");
  run->add_option("--seed", flags.seed, "Base seed; run r uses seed+r");
  run->add_option("--p-alt", flags.p_alt, "Probability of the SE kernel in bak");
  run->add_option("--acq", flags.acq, "Acquisition: ei or lcb");
  run->add_option("--beta", flags.beta, "LCB exploration weight");
  run->add_option("--noise", flags.noise, "GP noise variance");
  run->add_option("--candidates", flags.candidates, "Uniform candidates per proposal");
  run->add_option("--refine-steps", flags.refine_steps, "Local refinement sweeps per proposal");
  run->add_option("--compare-at", flags.compare_at, "Iterations for pairwise Welch verdicts");
  run->add_option("--out", flags.out, "Output directory");
  run->add_option("--jobs", flags.jobs, "Worker threads");

  app.add_subcommand("settings", "List benchmark settings and normalization constants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (app.got_subcommand("run")) return run_command(flags);
  return settings_command();
}
