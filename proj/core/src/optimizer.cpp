#include "bobak/optimizer.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bobak/errors.hpp"

namespace bobak {
namespace {

constexpr std::uint64_t kWarpRangeSeed = 0x5eed'0f'face;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

const WarpFunction* strategy_warp(const KernelStrategy& s) {
  return std::visit(Overloaded{[](const SeStrategy&) -> const WarpFunction* { return nullptr; },
                               [](const WarpedStrategy& w) -> const WarpFunction* { return &w.warp; },
                               [](const SumStrategy& w) -> const WarpFunction* { return &w.warp; },
                               [](const AlternationStrategy& w) -> const WarpFunction* { return &w.warp; }},
                    s);
}

struct IterationChoice {
  TrialLabel label;
  std::optional<double> theta;
};

// Draws theta for alternation strategies; fixed strategies consume nothing.
IterationChoice choose_kernel(const KernelStrategy& s, Rng& theta_rng) {
  return std::visit(Overloaded{[](const SeStrategy&) { return IterationChoice{TrialLabel::SE, std::nullopt}; },
                               [](const WarpedStrategy&) { return IterationChoice{TrialLabel::PHI, std::nullopt}; },
                               [](const SumStrategy&) { return IterationChoice{TrialLabel::SUM, std::nullopt}; },
                               [&](const AlternationStrategy& v) {
                                 const auto c = draw_kernel(v.p_alt, uniform01(theta_rng));
                                 return IterationChoice{c.label == KernelLabel::SE ? TrialLabel::SE : TrialLabel::PHI,
                                                        c.theta};
                               }},
                    s);
}

Kernel build_kernel(const KernelStrategy& s, TrialLabel label) {
  return std::visit(Overloaded{[](const SeStrategy& v) { return Kernel::squared_exponential(v.hyper); },
                               [](const WarpedStrategy& v) { return Kernel::warped(v.warp, v.hyper); },
                               [](const SumStrategy& v) { return Kernel::sum(v.raw, v.warp, v.warped); },
                               [&](const AlternationStrategy& v) {
                                 return label == TrialLabel::SE ? Kernel::squared_exponential(v.raw)
                                                                : Kernel::warped(v.warp, v.warped);
                               }},
                    s);
}

double evaluate_checked(const ObjectiveSpec& objective, const Point& x, int iteration) {
  const double y = objective.evaluate(x);
  if (!std::isfinite(y)) {
    throw EvaluationError("objective '" + objective.name + "' returned a non-finite value at iteration " +
                              std::to_string(iteration) + ", point " + format_point(x),
                          x);
  }
  return y;
}

void push_record(RunTrace& trace, int iteration, TrialLabel label, Point x, double y, std::optional<double> theta) {
  const double best = trace.records.empty() ? y : std::min(trace.records.back().best_so_far, y);
  trace.records.push_back(TrialRecord{iteration, label, std::move(x), y, best, theta});
}

void check_budget(int budget) {
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
}

}  // namespace

std::string to_string(TrialLabel label) {
  switch (label) {
    case TrialLabel::Init: return "INIT";
    case TrialLabel::SE: return "SE";
    case TrialLabel::PHI: return "PHI";
    case TrialLabel::SUM: return "SUM";
    case TrialLabel::Random: return "RANDOM";
  }
  return "?";
}

HyperoptSpace hyperopt_space(const ObjectiveSpec& objective, std::size_t warp_samples) {
  HyperoptSpace space{objective.domain.widths(), {}};
  if (!objective.warp) return space;
  Rng rng(kWarpRangeSeed);
  const Eigen::Index m = objective.warp->output_dim();
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi = -lo;
  for (std::size_t i = 0; i < warp_samples; ++i) {
    const Eigen::VectorXd w = (*objective.warp)(uniform_point(objective.domain, rng));
    lo = lo.cwiseMin(w);
    hi = hi.cwiseMax(w);
  }
  space.warp_widths = hi - lo;
  for (double& w : space.warp_widths) {
    if (!(w > 0.0)) w = 1.0;
  }
  return space;
}

KernelStrategy optimize_hyperparameters(const Dataset& data, const KernelStrategy& strategy, double noise_variance,
                                        const HyperoptSpace& space, const HyperoptConfig& cfg, Rng& raw_rng,
                                        Rng& warp_rng, Rng& sum_rng) {
  auto fit_raw = [&](const KernelHyper& h) {
    return *optimize_hyperparameters(data, Kernel::squared_exponential(h), noise_variance, space, cfg, raw_rng)
                .raw_hyper();
  };
  auto fit_warped = [&](const WarpFunction& warp, const KernelHyper& h) {
    return *optimize_hyperparameters(data, Kernel::warped(warp, h), noise_variance, space, cfg, warp_rng)
                .warped_hyper();
  };
  return std::visit(
      Overloaded{[&](const SeStrategy& v) -> KernelStrategy { return SeStrategy{fit_raw(v.hyper)}; },
                 [&](const WarpedStrategy& v) -> KernelStrategy {
                   return WarpedStrategy{v.warp, fit_warped(v.warp, v.hyper)};
                 },
                 [&](const SumStrategy& v) -> KernelStrategy {
                   const Kernel k = optimize_hyperparameters(data, Kernel::sum(v.raw, v.warp, v.warped),
                                                             noise_variance, space, cfg, sum_rng);
                   return SumStrategy{*k.raw_hyper(), v.warp, *k.warped_hyper()};
                 },
                 [&](const AlternationStrategy& v) -> KernelStrategy {
                   return AlternationStrategy{v.p_alt, fit_raw(v.raw), v.warp, fit_warped(v.warp, v.warped)};
                 }},
      strategy);
}

RunTrace run_bo(const ObjectiveSpec& objective, const KernelStrategy& strategy, const AcquisitionConfig& acq,
                int budget, std::uint64_t seed, const RunOptions& options) {
  check_budget(budget);
  acq.validate();
  if (options.initial_points < 1) throw InvalidArgument("at least one initial point is required");
  if (strategy_warp(strategy) != nullptr && !objective.warp) {
    throw InvalidArgument("strategy '" + strategy_name(strategy) + "' needs a warp but objective '" +
                          objective.name + "' has none");
  }
  if (const auto* a = std::get_if<AlternationStrategy>(&strategy); a && !(a->p_alt >= 0.0 && a->p_alt <= 1.0)) {
    throw InvalidArgument("p_alt must lie in [0, 1]");
  }

  Rng init_rng = make_stream(seed, Stream::Init);
  Rng theta_rng = make_stream(seed, Stream::KernelTheta);
  Rng acq_rng = make_stream(seed, Stream::Acquisition);
  Rng raw_rng = make_stream(seed, Stream::HyperoptRaw);
  Rng warp_rng = make_stream(seed, Stream::HyperoptWarp);
  Rng sum_rng = make_stream(seed, Stream::HyperoptSum);
  const HyperoptSpace space = hyperopt_space(objective);

  RunTrace trace{{}, seed, strategy_name(strategy), objective.name};
  trace.records.reserve(static_cast<std::size_t>(budget));
  KernelStrategy current = strategy;
  Dataset data;

  for (int it = 1; it <= budget; ++it) {
    if (it <= options.initial_points) {
      Point x = uniform_point(objective.domain, init_rng);
      const double y = evaluate_checked(objective, x, it);
      data.append(x, y);
      push_record(trace, it, TrialLabel::Init, std::move(x), y, std::nullopt);
      continue;
    }
    const IterationChoice chosen = choose_kernel(current, theta_rng);
    current = optimize_hyperparameters(data, current, options.noise_variance, space, options.hyperopt, raw_rng,
                                       warp_rng, sum_rng);
    const PosteriorModel model = fit_posterior(data, build_kernel(current, chosen.label), options.noise_variance);
    if (options.on_posterior) options.on_posterior(it, model);
    Point x = propose_next(model, objective.domain, acq, acq_rng);
    const double y = evaluate_checked(objective, x, it);
    data.append(x, y);
    push_record(trace, it, chosen.label, std::move(x), y, chosen.theta);
  }
  return trace;
}

RunTrace run_random_search(const ObjectiveSpec& objective, int budget, std::uint64_t seed) {
  check_budget(budget);
  Rng rng = make_stream(seed, Stream::Init);
  RunTrace trace{{}, seed, "random", objective.name};
  trace.records.reserve(static_cast<std::size_t>(budget));
  for (int it = 1; it <= budget; ++it) {
    Point x = uniform_point(objective.domain, rng);
    const double y = evaluate_checked(objective, x, it);
    push_record(trace, it, TrialLabel::Random, std::move(x), y, std::nullopt);
  }
  return trace;
}

std::vector<double> best_so_far_curve(const RunTrace& trace) {
  std::vector<double> curve;
  curve.reserve(trace.records.size());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : trace.records) {
    best = std::min(best, r.y);
    curve.push_back(best);
  }
  return curve;
}

bool same_trajectory(const RunTrace& a, const RunTrace& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& ra = a.records[i];
    const auto& rb = b.records[i];
    if (ra.iteration != rb.iteration || ra.label != rb.label || ra.y != rb.y || ra.best_so_far != rb.best_so_far ||
        ra.x.size() != rb.x.size() || ra.x != rb.x) {
      return false;
    }
  }
  return true;
}

}  // namespace bobak
