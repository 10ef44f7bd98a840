#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "bobak/domain.hpp"

namespace bobak {

/// Signal variance and per-dimension lengthscales of a squared-exponential kernel.
struct KernelHyper {
  double signal_variance = 1.0;
  Eigen::VectorXd lengthscales;

  static KernelHyper isotropic(Eigen::Index dimension, double lengthscale, double signal_variance = 1.0);

  /// Throws InvalidArgument unless every value is positive and finite and the
  /// lengthscale count equals `dimension`.
  void validate(Eigen::Index dimension) const;
};

/// Deterministic feature map phi applied to inputs before the SE kernel.
class WarpFunction {
 public:
  using Map = std::function<Eigen::VectorXd(const Point&)>;

  WarpFunction(std::string name, Eigen::Index output_dim, Map map);

  const std::string& name() const noexcept { return name_; }
  Eigen::Index output_dim() const noexcept { return output_dim_; }

  /// Throws EvaluationError if the output is non-finite or has the wrong length.
  Eigen::VectorXd operator()(const Point& x) const;

 private:
  std::string name_;
  Eigen::Index output_dim_;
  std::shared_ptr<const Map> map_;
};

struct SeStrategy {
  KernelHyper hyper;
};

struct WarpedStrategy {
  WarpFunction warp;
  KernelHyper hyper;
};

/// k_SE(x, x') + k_SE(phi(x), phi(x')), with independent hyperparameter sets.
struct SumStrategy {
  KernelHyper raw;
  WarpFunction warp;
  KernelHyper warped;
};

/// Bernoulli alternation: each iteration uses the raw SE kernel with probability p_alt and the
/// warped kernel otherwise.
struct AlternationStrategy {
  double p_alt = 0.5;
  KernelHyper raw;
  WarpFunction warp;
  KernelHyper warped;
};

using KernelStrategy = std::variant<SeStrategy, WarpedStrategy, SumStrategy, AlternationStrategy>;

/// Short name used in traces and CSV output: se, phi, sum, bak.
std::string strategy_name(const KernelStrategy& strategy);

enum class KernelLabel { SE, PHI };

struct KernelChoice {
  KernelLabel label;
  double theta;
};

double se_eval(const Point& x, const Point& x2, const KernelHyper& hyper);
double warped_eval(const Point& x, const Point& x2, const WarpFunction& warp, const KernelHyper& hyper);
double sum_eval(const Point& x, const Point& x2, const SumStrategy& strategy);

/// SE when theta <= p_alt, PHI otherwise. Pure; theta comes from the caller's RNG stream.
KernelChoice draw_kernel(double p_alt, double theta);

/// A point together with its warp image, so warps are evaluated once per point.
struct EmbeddedPoint {
  Point raw;
  Eigen::VectorXd warped;  // empty when the kernel has no warped component
};

/// The concrete covariance function used for one BO iteration: SE, warped SE, or their sum.
class Kernel {
 public:
  enum class Form { SquaredExponential, Warped, Sum };

  static Kernel squared_exponential(KernelHyper hyper);
  static Kernel warped(WarpFunction warp, KernelHyper hyper);
  static Kernel sum(KernelHyper raw, WarpFunction warp, KernelHyper warped);

  Form form() const noexcept { return form_; }
  const std::optional<KernelHyper>& raw_hyper() const noexcept { return raw_; }
  const std::optional<KernelHyper>& warped_hyper() const noexcept { return warped_; }
  const std::optional<WarpFunction>& warp() const noexcept { return warp_; }

  EmbeddedPoint embed(const Point& x) const;
  std::vector<EmbeddedPoint> embed(std::span<const Point> xs) const;

  double operator()(const Point& x, const Point& x2) const;
  double operator()(const EmbeddedPoint& x, const EmbeddedPoint& x2) const;

  /// k(x, x), identical for every x.
  double diagonal() const noexcept;

  /// Hyperparameters in log space: [log sf2_raw, log l_raw..., log sf2_warp, log l_warp...],
  /// listing only the components this form has.
  Eigen::VectorXd log_parameters() const;
  Kernel with_log_parameters(const Eigen::VectorXd& params) const;
  Eigen::Index parameter_count() const;

  /// For each log parameter j: 0.5 * sum_ab W(a,b) * dK(a,b)/dparam_j.
  Eigen::VectorXd contract_gradient(std::span<const EmbeddedPoint> points, const Eigen::MatrixXd& w) const;

 private:
  Kernel(Form form, std::optional<KernelHyper> raw, std::optional<WarpFunction> warp,
         std::optional<KernelHyper> warped);

  Form form_;
  std::optional<KernelHyper> raw_;
  std::optional<WarpFunction> warp_;
  std::optional<KernelHyper> warped_;
};

Eigen::MatrixXd gram(std::span<const Point> points, const Kernel& kernel);
Eigen::MatrixXd gram(std::span<const EmbeddedPoint> points, const Kernel& kernel);

}  // namespace bobak
