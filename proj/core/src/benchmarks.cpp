#include "bobak/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "bobak/errors.hpp"
#include "bobak/rng.hpp"

namespace bobak::benchmarks {
namespace {

void check_nonempty(const Point& x) {
  if (x.size() == 0) throw InvalidArgument("benchmark functions need d >= 1");
}

BenchmarkSetting ackley_setting(std::string name, Eigen::Index d, double half_width, int budget) {
  return BenchmarkSetting{std::move(name), d, Domain::cube(d, -half_width, half_width), make_ackley_warp(),
                          [](const Point& x) { return ackley(x); }, budget};
}

BenchmarkSetting rastrigin_setting(std::string name, Eigen::Index d, double half_width, int budget) {
  return BenchmarkSetting{std::move(name), d, Domain::cube(d, -half_width, half_width), make_rastrigin_warp(),
                          [](const Point& x) { return rastrigin(x); }, budget};
}

}  // namespace

double ackley(const Point& x, const AckleyParams& p) {
  const Eigen::Vector2d w = ackley_warp(x, p);
  return -p.a * std::exp(w(0)) - std::exp(w(1)) + p.a + std::numbers::e;
}

double rastrigin(const Point& x, const RastriginParams& p) {
  const Eigen::Vector2d w = rastrigin_warp(x, p);
  return w(0) - w(1) + p.a * static_cast<double>(x.size());
}

Eigen::Vector2d ackley_warp(const Point& x, const AckleyParams& p) {
  check_nonempty(x);
  const auto d = static_cast<double>(x.size());
  double sq = 0.0;
  double cs = 0.0;
  for (double xi : x) {
    sq += xi * xi;
    cs += std::cos(p.c * xi);
  }
  return {-p.b * std::sqrt(sq / d), cs / d};
}

Eigen::Vector2d rastrigin_warp(const Point& x, const RastriginParams& p) {
  check_nonempty(x);
  double sq = 0.0;
  double cs = 0.0;
  for (double xi : x) {
    sq += xi * xi;
    cs += p.a * std::cos(p.c * std::numbers::pi * xi);
  }
  return {sq, cs};
}

WarpFunction make_ackley_warp(const AckleyParams& p) {
  return WarpFunction("ackley_phi", 2, [p](const Point& x) -> Eigen::VectorXd { return ackley_warp(x, p); });
}

WarpFunction make_rastrigin_warp(const RastriginParams& p) {
  return WarpFunction("rastrigin_phi", 2, [p](const Point& x) -> Eigen::VectorXd { return rastrigin_warp(x, p); });
}

ObjectiveSpec BenchmarkSetting::objective() const { return ObjectiveSpec{name, domain, function, warp, 0.0}; }

const std::vector<std::string>& setting_names() {
  static const std::vector<std::string> names{"ackley2d_near", "ackley2d_far", "ackley10d", "rastrigin10d"};
  return names;
}

BenchmarkSetting make_setting(std::string_view name) {
  if (name == "ackley2d_near") return ackley_setting("ackley2d_near", 2, 10.0, 80);
  if (name == "ackley2d_far") return ackley_setting("ackley2d_far", 2, 100.0, 80);
  if (name == "ackley10d") return ackley_setting("ackley10d", 10, 10.0, 100);
  if (name == "rastrigin10d") return rastrigin_setting("rastrigin10d", 10, 5.0, 100);
  throw InvalidArgument("unknown benchmark setting '" + std::string(name) +
                        "' (expected ackley2d_near, ackley2d_far, ackley10d or rastrigin10d)");
}

double estimate_normalization(const BenchmarkSetting& setting, std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  double y_max = 0.0;
  Point x(setting.dimension);
  for (std::size_t i = 0; i < samples; ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = uniform(rng, setting.domain.lower()(j), setting.domain.upper()(j));
    y_max = std::max(y_max, setting.function(x));
  }
  return y_max;
}

double normalization_constant(const BenchmarkSetting& setting) {
  static std::mutex mutex;
  static std::map<std::string, double> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(setting.name); it != cache.end()) return it->second;
  const double y_max = estimate_normalization(setting);
  cache.emplace(setting.name, y_max);
  return y_max;
}

double normalized_cost(double y, double y_max) {
  if (!(y_max > 0.0)) throw InvalidArgument("normalization constant must be positive");
  return std::clamp(y / y_max, 0.0, 1.0);
}

double normalized_cost(const BenchmarkSetting& setting, double y) {
  return normalized_cost(y, normalization_constant(setting));
}

}  // namespace bobak::benchmarks
