#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "bobak/domain.hpp"
#include "bobak/kernels.hpp"
#include "bobak/objective.hpp"

namespace bobak::benchmarks {

struct AckleyParams {
  double a = 20.0;
  double b = 0.2;
  double c = 2.0 * std::numbers::pi;
};

struct RastriginParams {
  double a = 10.0;
  double c = 2.0;
};

/// -a exp(-b sqrt(mean x_i^2)) - exp(mean cos(c x_i)) + a + e. Minimum 0 at the origin.
double ackley(const Point& x, const AckleyParams& p = {});

/// sum x_i^2 - sum a cos(c pi x_i) + a d. Minimum 0 at the origin.
double rastrigin(const Point& x, const RastriginParams& p = {});

/// The arguments of Ackley's two exponentials: (-b sqrt(mean x_i^2), mean cos(c x_i)).
Eigen::Vector2d ackley_warp(const Point& x, const AckleyParams& p = {});

/// Rastrigin's first two sums: (sum x_i^2, sum a cos(c pi x_i)).
Eigen::Vector2d rastrigin_warp(const Point& x, const RastriginParams& p = {});

WarpFunction make_ackley_warp(const AckleyParams& p = {});
WarpFunction make_rastrigin_warp(const RastriginParams& p = {});

/// One of the four synthetic comparison settings.
struct BenchmarkSetting {
  std::string name;
  Eigen::Index dimension = 0;
  Domain domain;
  WarpFunction warp;
  std::function<double(const Point&)> function;
  int default_budget = 0;

  ObjectiveSpec objective() const;
};

/// ackley2d_near, ackley2d_far, ackley10d, rastrigin10d.
const std::vector<std::string>& setting_names();

/// Throws InvalidArgument for unknown names.
BenchmarkSetting make_setting(std::string_view name);

inline constexpr std::size_t kNormalizationSamples = 1'000'000;
inline constexpr std::uint64_t kNormalizationSeed = 20190512;

/// Maximum cost over `samples` uniform points of the setting's domain.
double estimate_normalization(const BenchmarkSetting& setting, std::size_t samples = kNormalizationSamples,
                              std::uint64_t seed = kNormalizationSeed);

/// estimate_normalization with the default sample count and seed, computed once per setting.
double normalization_constant(const BenchmarkSetting& setting);

/// clamp(y / y_max, 0, 1); the known minimum of every setting is 0.
double normalized_cost(double y, double y_max);
double normalized_cost(const BenchmarkSetting& setting, double y);

}  // namespace bobak::benchmarks
