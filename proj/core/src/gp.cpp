#include "bobak/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <ceres/ceres.h>
#include <Eigen/Cholesky>

#include "bobak/errors.hpp"

namespace bobak {
namespace {

constexpr double kJitterStart = 1e-9;
constexpr double kJitterMax = 1e-3;

struct Factorization {
  Eigen::MatrixXd lower;
  double jitter = 0.0;
};

bool try_cholesky(const Eigen::MatrixXd& a, Eigen::MatrixXd& lower) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) return false;
  lower = llt.matrixL();
  const auto diag = lower.diagonal();
  return diag.allFinite() && (diag.array() > 0.0).all();
}

// Factorizes a (already including the noise diagonal), adding jitter relative to its mean diagonal.
Factorization factorize(const Eigen::MatrixXd& a) {
  Factorization f;
  if (try_cholesky(a, f.lower)) return f;
  const double scale = a.diagonal().mean();
  for (double rel = kJitterStart; rel <= kJitterMax * (1 + 1e-12); rel *= 10.0) {
    f.jitter = rel * scale;
    Eigen::MatrixXd shifted = a;
    shifted.diagonal().array() += f.jitter;
    if (try_cholesky(shifted, f.lower)) return f;
  }
  throw NumericalError("Gram matrix is not positive definite even with jitter " + std::to_string(f.jitter) +
                       " (" + std::to_string(a.rows()) + " points; likely duplicated inputs or degenerate "
                       "hyperparameters)");
}

struct CenteredTargets {
  Eigen::VectorXd values;
  double shift;
};

CenteredTargets center(const Dataset& data) {
  Eigen::VectorXd y = data.targets();
  const double shift = y.mean();
  y.array() -= shift;
  return {std::move(y), shift};
}

void check_fit_inputs(const Dataset& data, double noise_variance) {
  if (data.empty()) throw InvalidArgument("cannot fit a posterior to an empty dataset; use predict_prior");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw InvalidArgument("noise variance must be finite and nonnegative");
  }
}

double sample_variance(const Eigen::VectorXd& y) {
  if (y.size() < 2) return 0.0;
  const double m = y.mean();
  return (y.array() - m).square().sum() / static_cast<double>(y.size() - 1);
}

// Maps the optimizer's (possibly tied) coordinates onto the kernel's full log-parameter vector.
struct ParameterTying {
  std::vector<Eigen::Index> group;  // reduced index of each full parameter
  Eigen::Index reduced = 0;

  static ParameterTying build(const Kernel& kernel, bool tie_raw_lengthscales) {
    ParameterTying t;
    Eigen::Index k = 0;
    if (const auto& raw = kernel.raw_hyper()) {
      t.group.push_back(k++);
      const Eigen::Index first = k;
      for (Eigen::Index i = 0; i < raw->lengthscales.size(); ++i) t.group.push_back(tie_raw_lengthscales ? first : k++);
      if (tie_raw_lengthscales) ++k;
    }
    if (const auto& warped = kernel.warped_hyper()) {
      for (Eigen::Index i = 0; i <= warped->lengthscales.size(); ++i) t.group.push_back(k++);
    }
    t.reduced = k;
    return t;
  }

  Eigen::VectorXd expand(const Eigen::VectorXd& r) const {
    Eigen::VectorXd full(static_cast<Eigen::Index>(group.size()));
    for (std::size_t j = 0; j < group.size(); ++j) full(static_cast<Eigen::Index>(j)) = r(group[j]);
    return full;
  }

  Eigen::VectorXd reduce_gradient(const Eigen::VectorXd& g) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(reduced);
    for (std::size_t j = 0; j < group.size(); ++j) r(group[j]) += g(static_cast<Eigen::Index>(j));
    return r;
  }

  // Group means of a full vector.
  Eigen::VectorXd reduce(const Eigen::VectorXd& full) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(reduced);
    Eigen::VectorXd n = Eigen::VectorXd::Zero(reduced);
    for (std::size_t j = 0; j < group.size(); ++j) {
      r(group[j]) += full(static_cast<Eigen::Index>(j));
      n(group[j]) += 1.0;
    }
    return r.cwiseQuotient(n);
  }

  LogBounds reduce(const LogBounds& b) const {
    LogBounds r{Eigen::VectorXd::Constant(reduced, -std::numeric_limits<double>::infinity()),
                Eigen::VectorXd::Constant(reduced, std::numeric_limits<double>::infinity())};
    for (std::size_t j = 0; j < group.size(); ++j) {
      r.lower(group[j]) = std::max(r.lower(group[j]), b.lower(static_cast<Eigen::Index>(j)));
      r.upper(group[j]) = std::min(r.upper(group[j]), b.upper(static_cast<Eigen::Index>(j)));
    }
    return r;
  }
};

// -LML over the reduced log-parameters. Points outside the box are evaluated at their
// projection plus a quadratic penalty, which keeps L-BFGS well defined at the bounds.
class NegativeLml final : public ceres::FirstOrderFunction {
 public:
  NegativeLml(const Dataset& data, const Kernel& kernel, double noise, const LogBounds& bounds,
              const ParameterTying& tying)
      : data_(data), kernel_(kernel), noise_(noise), bounds_(bounds), tying_(tying) {}

  bool Evaluate(const double* params, double* cost, double* gradient) const override {
    const Eigen::Map<const Eigen::VectorXd> p(params, NumParameters());
    const Eigen::VectorXd clamped = p.cwiseMax(bounds_.lower).cwiseMin(bounds_.upper);
    const Eigen::VectorXd outside = p - clamped;
    LmlWithGradient r;
    try {
      r = log_marginal_likelihood_with_gradient(data_, kernel_.with_log_parameters(tying_.expand(clamped)), noise_);
    } catch (const NumericalError&) {
      return false;
    } catch (const InvalidArgument&) {
      return false;
    }
    if (!std::isfinite(r.value)) return false;
    *cost = -r.value + kPenalty * outside.squaredNorm();
    if (gradient != nullptr) {
      const Eigen::VectorXd g_lml = tying_.reduce_gradient(r.gradient);
      Eigen::Map<Eigen::VectorXd> g(gradient, NumParameters());
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        g(j) = outside(j) != 0.0 ? 2.0 * kPenalty * outside(j) : -g_lml(j);
      }
    }
    return true;
  }

  int NumParameters() const override { return static_cast<int>(tying_.reduced); }

 private:
  static constexpr double kPenalty = 10.0;
  const Dataset& data_;
  const Kernel& kernel_;
  double noise_;
  const LogBounds& bounds_;
  const ParameterTying& tying_;
};

double safe_lml(const Dataset& data, const Kernel& kernel, double noise) {
  try {
    const double v = log_marginal_likelihood(data, kernel, noise);
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  } catch (const NumericalError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

}  // namespace

void Dataset::append(Point x, double y) {
  if (!points_.empty() && x.size() != dimension()) {
    throw InvalidArgument("observation has dimension " + std::to_string(x.size()) + ", dataset has " +
                          std::to_string(dimension()));
  }
  if (x.size() == 0) throw InvalidArgument("observation point is empty");
  if (!std::isfinite(y) || !x.allFinite()) throw InvalidArgument("observation must be finite");
  points_.push_back(std::move(x));
  targets_.push_back(y);
}

Eigen::VectorXd Dataset::targets() const {
  return Eigen::Map<const Eigen::VectorXd>(targets_.data(), static_cast<Eigen::Index>(targets_.size()));
}

double Dataset::best_y() const {
  if (targets_.empty()) throw InvalidArgument("empty dataset has no best value");
  return *std::min_element(targets_.begin(), targets_.end());
}

PosteriorModel fit_posterior(const Dataset& data, Kernel kernel, double noise_variance) {
  check_fit_inputs(data, noise_variance);
  PosteriorModel model(std::move(kernel));
  model.noise_variance_ = noise_variance;
  model.train_ = model.kernel_.embed(data.points());
  Eigen::MatrixXd a = gram(std::span<const EmbeddedPoint>(model.train_), model.kernel_);
  a.diagonal().array() += noise_variance;
  auto f = factorize(a);
  model.factor_ = std::move(f.lower);
  model.jitter_ = f.jitter;
  auto [yc, shift] = center(data);
  model.weights_ = model.factor_.transpose().triangularView<Eigen::Upper>().solve(
      model.factor_.triangularView<Eigen::Lower>().solve(yc));
  model.y_shift_ = shift;
  model.best_y_ = data.best_y();
  return model;
}

Prediction PosteriorModel::predict(const Point& x) const {
  const EmbeddedPoint e = kernel_.embed(x);
  const auto n = static_cast<Eigen::Index>(train_.size());
  Eigen::VectorXd ks(n);
  for (Eigen::Index i = 0; i < n; ++i) ks(i) = kernel_(train_[i], e);
  const double mean = y_shift_ + ks.dot(weights_);
  const Eigen::VectorXd v = factor_.triangularView<Eigen::Lower>().solve(ks);
  const double var = kernel_(e, e) - v.squaredNorm();
  return {mean, std::max(var, 0.0)};
}

std::vector<Prediction> PosteriorModel::predict(std::span<const Point> xs) const {
  const auto m = static_cast<Eigen::Index>(xs.size());
  const auto n = static_cast<Eigen::Index>(train_.size());
  std::vector<Prediction> out;
  out.reserve(xs.size());
  if (m == 0) return out;
  Eigen::MatrixXd ks(n, m);
  Eigen::VectorXd prior(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const EmbeddedPoint e = kernel_.embed(xs[j]);
    prior(j) = kernel_(e, e);
    for (Eigen::Index i = 0; i < n; ++i) ks(i, j) = kernel_(train_[i], e);
  }
  const Eigen::VectorXd means = (ks.transpose() * weights_).array() + y_shift_;
  factor_.triangularView<Eigen::Lower>().solveInPlace(ks);
  const Eigen::VectorXd reduction = ks.colwise().squaredNorm().transpose();
  for (Eigen::Index j = 0; j < m; ++j) out.push_back({means(j), std::max(prior(j) - reduction(j), 0.0)});
  return out;
}

Prediction predict(const PosteriorModel& model, const Point& x) { return model.predict(x); }

Prediction predict_prior(const Kernel& kernel, const Point& x) {
  const EmbeddedPoint e = kernel.embed(x);
  return {0.0, kernel(e, e)};
}

double log_marginal_likelihood(const Dataset& data, const Kernel& kernel, double noise_variance) {
  check_fit_inputs(data, noise_variance);
  const auto pts = kernel.embed(data.points());
  Eigen::MatrixXd a = gram(std::span<const EmbeddedPoint>(pts), kernel);
  a.diagonal().array() += noise_variance;
  const auto f = factorize(a);
  const auto [yc, shift] = center(data);
  const Eigen::VectorXd z = f.lower.triangularView<Eigen::Lower>().solve(yc);
  const auto n = static_cast<double>(data.size());
  return -0.5 * z.squaredNorm() - f.lower.diagonal().array().log().sum() -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

LmlWithGradient log_marginal_likelihood_with_gradient(const Dataset& data, const Kernel& kernel,
                                                      double noise_variance) {
  check_fit_inputs(data, noise_variance);
  const auto pts = kernel.embed(data.points());
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd a = gram(std::span<const EmbeddedPoint>(pts), kernel);
  a.diagonal().array() += noise_variance;
  const auto f = factorize(a);
  const auto [yc, shift] = center(data);
  const auto l = f.lower.triangularView<Eigen::Lower>();
  const Eigen::VectorXd z = l.solve(yc);
  const auto u = f.lower.transpose().triangularView<Eigen::Upper>();
  const Eigen::VectorXd alpha = u.solve(z);

  Eigen::MatrixXd inverse = Eigen::MatrixXd::Identity(n, n);
  l.solveInPlace(inverse);
  u.solveInPlace(inverse);
  const Eigen::MatrixXd w = alpha * alpha.transpose() - inverse;

  LmlWithGradient out;
  out.value = -0.5 * z.squaredNorm() - f.lower.diagonal().array().log().sum() -
              0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  out.gradient = kernel.contract_gradient(pts, w);
  return out;
}

LogBounds hyperparameter_bounds(const Dataset& data, const Kernel& kernel, const HyperoptSpace& space,
                                const HyperoptConfig& cfg) {
  double var = sample_variance(data.targets());
  if (!(var > 0.0)) var = 1.0;
  const Eigen::Index count = kernel.parameter_count();
  LogBounds b{Eigen::VectorXd(count), Eigen::VectorXd(count)};
  Eigen::Index k = 0;
  auto fill = [&](const KernelHyper& h, const Eigen::VectorXd& widths) {
    if (widths.size() != h.lengthscales.size()) {
      throw InvalidArgument("hyperparameter space widths do not match the kernel's lengthscale count");
    }
    b.lower(k) = std::log(cfg.variance_min * var);
    b.upper(k) = std::log(cfg.variance_max * var);
    ++k;
    for (Eigen::Index i = 0; i < widths.size(); ++i, ++k) {
      b.lower(k) = std::log(cfg.lengthscale_min * widths(i));
      b.upper(k) = std::log(cfg.lengthscale_max * widths(i));
    }
  };
  if (kernel.raw_hyper()) fill(*kernel.raw_hyper(), space.raw_widths);
  if (kernel.warped_hyper()) fill(*kernel.warped_hyper(), space.warp_widths);
  return b;
}

Kernel optimize_hyperparameters(const Dataset& data, const Kernel& incumbent, double noise_variance,
                                const HyperoptSpace& space, const HyperoptConfig& cfg, Rng& rng) {
  if (data.size() < cfg.min_observations) return incumbent;
  const ParameterTying tying = ParameterTying::build(incumbent, cfg.tie_raw_lengthscales);
  const LogBounds bounds = tying.reduce(hyperparameter_bounds(data, incumbent, space, cfg));

  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_num_iterations = cfg.max_iterations;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;

  Kernel best = incumbent;
  double best_lml = safe_lml(data, incumbent, noise_variance);
  for (int start = 0; start < cfg.restarts; ++start) {
    Eigen::VectorXd p(tying.reduced);
    if (start == 0) {
      p = tying.reduce(incumbent.log_parameters()).cwiseMax(bounds.lower).cwiseMin(bounds.upper);
    } else {
      for (Eigen::Index j = 0; j < p.size(); ++j) p(j) = uniform(rng, bounds.lower(j), bounds.upper(j));
    }
    ceres::GradientProblem problem(new NegativeLml(data, incumbent, noise_variance, bounds, tying));
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(options, problem, p.data(), &summary);
    p = p.cwiseMax(bounds.lower).cwiseMin(bounds.upper);
    if (!p.allFinite()) continue;
    Kernel candidate = incumbent.with_log_parameters(tying.expand(p));
    const double lml = safe_lml(data, candidate, noise_variance);
    if (lml > best_lml) {
      best_lml = lml;
      best = std::move(candidate);
    }
  }
  return best;
}

}  // namespace bobak
