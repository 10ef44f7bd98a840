#include "bobak/acquisition.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "bobak/errors.hpp"

namespace bobak {
namespace {

constexpr double kInitialRadius = 0.1;  // fraction of each domain width
constexpr double kRadiusDecay = 0.7;

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

void AcquisitionConfig::validate() const {
  if (candidate_count < 1) throw InvalidArgument("candidate_count must be at least 1");
  if (refine_steps < 0) throw InvalidArgument("refine_steps must be nonnegative");
  if (kind == AcquisitionKind::LowerConfidenceBound && !(beta > 0.0)) {
    throw InvalidArgument("LCB beta must be positive");
  }
}

std::string to_string(AcquisitionKind kind) {
  return kind == AcquisitionKind::ExpectedImprovement ? "ei" : "lcb";
}

AcquisitionKind parse_acquisition_kind(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "ei") return AcquisitionKind::ExpectedImprovement;
  if (lower == "lcb") return AcquisitionKind::LowerConfidenceBound;
  throw InvalidArgument("unknown acquisition '" + text + "' (expected ei or lcb)");
}

double expected_improvement(const Prediction& pred, double best_y) {
  const double s = std::sqrt(std::max(pred.variance, 0.0));
  const double gap = best_y - pred.mean;
  if (s == 0.0) return std::max(gap, 0.0);
  const double z = gap / s;
  return std::max(gap * normal_cdf(z) + s * normal_pdf(z), 0.0);
}

double lcb(const Prediction& pred, double beta) { return pred.mean - beta * std::sqrt(std::max(pred.variance, 0.0)); }

double acquisition_utility(const Prediction& pred, double best_y, const AcquisitionConfig& cfg) {
  return cfg.kind == AcquisitionKind::ExpectedImprovement ? expected_improvement(pred, best_y)
                                                          : -lcb(pred, cfg.beta);
}

Point propose_next(const PosteriorModel& model, const Domain& domain, const AcquisitionConfig& cfg, Rng& rng) {
  cfg.validate();
  const double best_y = model.best_y();
  std::vector<Point> candidates;
  candidates.reserve(static_cast<std::size_t>(cfg.candidate_count));
  for (int i = 0; i < cfg.candidate_count; ++i) candidates.push_back(uniform_point(domain, rng));

  const auto preds = model.predict(candidates);
  std::size_t best = 0;
  double best_u = acquisition_utility(preds[0], best_y, cfg);
  for (std::size_t i = 1; i < preds.size(); ++i) {
    const double u = acquisition_utility(preds[i], best_y, cfg);
    if (u > best_u) {
      best_u = u;
      best = i;
    }
  }

  Point x = candidates[best];
  Eigen::VectorXd radius = kInitialRadius * domain.widths();
  for (int step = 0; step < cfg.refine_steps; ++step) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      Point trial = x;
      trial(i) = std::clamp(x(i) + (2.0 * uniform01(rng) - 1.0) * radius(i), domain.lower()(i), domain.upper()(i));
      const double u = acquisition_utility(model.predict(trial), best_y, cfg);
      if (u > best_u) {
        best_u = u;
        x = std::move(trial);
      }
    }
    radius *= kRadiusDecay;
  }
  return x;
}

}  // namespace bobak
