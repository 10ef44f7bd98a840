#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bobak/acquisition.hpp"
#include "bobak/gp.hpp"
#include "bobak/kernels.hpp"
#include "bobak/objective.hpp"

namespace bobak {

enum class TrialLabel { Init, SE, PHI, SUM, Random };

std::string to_string(TrialLabel label);

struct TrialRecord {
  int iteration = 0;  // 1-based
  TrialLabel label = TrialLabel::Init;
  Point x;
  double y = 0.0;
  double best_so_far = 0.0;
  std::optional<double> theta;  // recorded for alternation runs
};

struct RunTrace {
  std::vector<TrialRecord> records;
  std::uint64_t seed = 0;
  std::string strategy;
  std::string objective;
};

struct RunOptions {
  double noise_variance = 1e-4;
  int initial_points = 1;
  HyperoptConfig hyperopt;
  /// Called after the posterior for `iteration` is fitted, before the proposal.
  std::function<void(int iteration, const PosteriorModel&)> on_posterior;
};

/// Lengthscale scales for hyperparameter fitting: raw box widths, and warp output ranges
/// estimated from a fixed sample of the domain.
HyperoptSpace hyperopt_space(const ObjectiveSpec& objective, std::size_t warp_samples = 4096);

/// Refits every kernel component the strategy carries. Each component draws from its own
/// stream so that, e.g., the raw SE fit of an alternation run matches a plain SE run.
KernelStrategy optimize_hyperparameters(const Dataset& data, const KernelStrategy& strategy, double noise_variance,
                                        const HyperoptSpace& space, const HyperoptConfig& cfg, Rng& raw_rng,
                                        Rng& warp_rng, Rng& sum_rng);

/// Bayesian optimization with the given kernel strategy. Iterations 1..initial_points are
/// uniform random; afterwards each iteration picks its kernel, refits hyperparameters, fits
/// the posterior on all previous trials and evaluates the acquisition argmax.
RunTrace run_bo(const ObjectiveSpec& objective, const KernelStrategy& strategy, const AcquisitionConfig& acq,
                int budget, std::uint64_t seed, const RunOptions& options = {});

RunTrace run_random_search(const ObjectiveSpec& objective, int budget, std::uint64_t seed);

std::vector<double> best_so_far_curve(const RunTrace& trace);

/// Same iterations, labels, points and costs bit for bit. Theta is an audit field and is ignored.
bool same_trajectory(const RunTrace& a, const RunTrace& b);

}  // namespace bobak
