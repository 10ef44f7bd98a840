#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "bobak/domain.hpp"
#include "bobak/kernels.hpp"
#include "bobak/rng.hpp"

namespace bobak {

struct Observation {
  Point x;
  double y;
};

/// Trial history D_n, append-only and in trial order.
class Dataset {
 public:
  Dataset() = default;

  /// Throws InvalidArgument on a dimension change or a non-finite value.
  void append(Point x, double y);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  Eigen::Index dimension() const noexcept { return points_.empty() ? 0 : points_.front().size(); }

  std::span<const Point> points() const noexcept { return points_; }
  Eigen::VectorXd targets() const;
  Observation operator[](std::size_t i) const { return {points_[i], targets_[i]}; }
  double best_y() const;

 private:
  std::vector<Point> points_;
  std::vector<double> targets_;
};

struct Prediction {
  double mean;
  double variance;
};

/// Factorized GP posterior for one kernel. Immutable once fitted.
class PosteriorModel {
 public:
  const Kernel& kernel() const noexcept { return kernel_; }
  double noise_variance() const noexcept { return noise_variance_; }
  /// Extra diagonal added beyond the noise to make the factorization succeed (0 if none).
  double jitter() const noexcept { return jitter_; }
  /// Lower-triangular L with L L^T = K + (noise + jitter) I.
  const Eigen::MatrixXd& gram_factor() const noexcept { return factor_; }
  /// (K + (noise + jitter) I)^{-1} (y - y_shift).
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  double y_shift() const noexcept { return y_shift_; }
  double best_y() const noexcept { return best_y_; }
  std::size_t size() const noexcept { return train_.size(); }

  Prediction predict(const Point& x) const;
  std::vector<Prediction> predict(std::span<const Point> xs) const;

 private:
  friend PosteriorModel fit_posterior(const Dataset&, Kernel, double);

  explicit PosteriorModel(Kernel kernel) : kernel_(std::move(kernel)) {}

  Kernel kernel_;
  double noise_variance_ = 0.0;
  double jitter_ = 0.0;
  std::vector<EmbeddedPoint> train_;
  Eigen::MatrixXd factor_;
  Eigen::VectorXd weights_;
  double y_shift_ = 0.0;
  double best_y_ = 0.0;
};

/// Centers y by its mean and factorizes K + noise I, escalating jitter from 1e-9 to 1e-3 times
/// the mean diagonal when plain Cholesky fails. Throws NumericalError past that.
PosteriorModel fit_posterior(const Dataset& data, Kernel kernel, double noise_variance);

Prediction predict(const PosteriorModel& model, const Point& x);

/// Zero-mean prior: (0, k(x, x)).
Prediction predict_prior(const Kernel& kernel, const Point& x);

double log_marginal_likelihood(const Dataset& data, const Kernel& kernel, double noise_variance);

struct LmlWithGradient {
  double value;
  Eigen::VectorXd gradient;  // with respect to kernel.log_parameters()
};

LmlWithGradient log_marginal_likelihood_with_gradient(const Dataset& data, const Kernel& kernel,
                                                      double noise_variance);

struct HyperoptConfig {
  int restarts = 5;  // total starts, the incumbent being the first
  std::size_t min_observations = 3;
  int max_iterations = 50;
  double lengthscale_min = 1e-2;  // times the width of the space
  double lengthscale_max = 10.0;
  double variance_min = 1e-4;  // times var(y)
  double variance_max = 1e4;
  bool tie_raw_lengthscales = false;  // one shared lengthscale for the raw input space
};

/// Widths of the raw input box and of the warp output range; lengthscale bounds scale with them.
struct HyperoptSpace {
  Eigen::VectorXd raw_widths;
  Eigen::VectorXd warp_widths;
};

/// Multi-start L-BFGS on the log marginal likelihood in log space. Returns the incumbent
/// unchanged when data has fewer than cfg.min_observations points or nothing beats it.
Kernel optimize_hyperparameters(const Dataset& data, const Kernel& incumbent, double noise_variance,
                                const HyperoptSpace& space, const HyperoptConfig& cfg, Rng& rng);

/// Box in log-parameter space used by optimize_hyperparameters.
struct LogBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};
LogBounds hyperparameter_bounds(const Dataset& data, const Kernel& kernel, const HyperoptSpace& space,
                                const HyperoptConfig& cfg);

}  // namespace bobak
