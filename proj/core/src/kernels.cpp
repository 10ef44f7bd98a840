#include "bobak/kernels.hpp"

#include <cmath>
#include <string>

#include "bobak/errors.hpp"

namespace bobak {
namespace {

double scaled_sq_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& ls) {
  double r2 = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double z = (a(i) - b(i)) / ls(i);
    r2 += z * z;
  }
  return r2;
}

double se_core(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelHyper& h) {
  return h.signal_variance * std::exp(-0.5 * scaled_sq_distance(a, b, h.lengthscales));
}

void check_pair(const Point& x, const Point& x2, const KernelHyper& hyper) {
  if (x.size() != x2.size()) {
    throw InvalidArgument("kernel arguments differ in dimension: " + std::to_string(x.size()) + " vs " +
                          std::to_string(x2.size()));
  }
  hyper.validate(x.size());
}

// Accumulates the SE part of the gradient contraction into out[offset ...].
void contract_se(std::span<const EmbeddedPoint> pts, bool use_warped, const KernelHyper& h,
                 const Eigen::MatrixXd& w, Eigen::VectorXd& out, Eigen::Index offset) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  const Eigen::Index dim = h.lengthscales.size();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim + 1);
  Eigen::VectorXd z2(dim);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto& ua = use_warped ? pts[a].warped : pts[a].raw;
    acc(0) += w(a, a) * h.signal_variance;
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const auto& ub = use_warped ? pts[b].warped : pts[b].raw;
      double r2 = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        const double z = (ua(i) - ub(i)) / h.lengthscales(i);
        z2(i) = z * z;
        r2 += z2(i);
      }
      const double wk = 2.0 * w(a, b) * h.signal_variance * std::exp(-0.5 * r2);
      acc(0) += wk;
      acc.tail(dim) += wk * z2;
    }
  }
  out.segment(offset, dim + 1) += 0.5 * acc;
}

KernelHyper hyper_from_log(const Eigen::VectorXd& p, Eigen::Index offset, Eigen::Index dim) {
  KernelHyper h;
  h.signal_variance = std::exp(p(offset));
  h.lengthscales = p.segment(offset + 1, dim).array().exp();
  return h;
}

}  // namespace

KernelHyper KernelHyper::isotropic(Eigen::Index dimension, double lengthscale, double signal_variance) {
  return KernelHyper{signal_variance, Eigen::VectorXd::Constant(dimension, lengthscale)};
}

void KernelHyper::validate(Eigen::Index dimension) const {
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
    throw InvalidArgument("signal variance must be positive and finite");
  }
  if (lengthscales.size() != dimension) {
    throw InvalidArgument("expected " + std::to_string(dimension) + " lengthscales, got " +
                          std::to_string(lengthscales.size()));
  }
  for (double l : lengthscales) {
    if (!(l > 0.0) || !std::isfinite(l)) throw InvalidArgument("lengthscales must be positive and finite");
  }
}

WarpFunction::WarpFunction(std::string name, Eigen::Index output_dim, Map map)
    : name_(std::move(name)), output_dim_(output_dim), map_(std::make_shared<const Map>(std::move(map))) {
  if (output_dim_ <= 0) throw InvalidArgument("warp output dimension must be positive");
}

Eigen::VectorXd WarpFunction::operator()(const Point& x) const {
  Eigen::VectorXd y = (*map_)(x);
  if (y.size() != output_dim_) {
    throw EvaluationError("warp '" + name_ + "' returned " + std::to_string(y.size()) + " components, expected " +
                              std::to_string(output_dim_),
                          x);
  }
  if (!y.allFinite()) {
    throw EvaluationError("warp '" + name_ + "' is not finite at " + format_point(x), x);
  }
  return y;
}

std::string strategy_name(const KernelStrategy& strategy) {
  struct {
    std::string operator()(const SeStrategy&) const { return "se"; }
    std::string operator()(const WarpedStrategy&) const { return "phi"; }
    std::string operator()(const SumStrategy&) const { return "sum"; }
    std::string operator()(const AlternationStrategy&) const { return "bak"; }
  } visitor;
  return std::visit(visitor, strategy);
}

double se_eval(const Point& x, const Point& x2, const KernelHyper& hyper) {
  check_pair(x, x2, hyper);
  return se_core(x, x2, hyper);
}

double warped_eval(const Point& x, const Point& x2, const WarpFunction& warp, const KernelHyper& hyper) {
  return se_eval(warp(x), warp(x2), hyper);
}

double sum_eval(const Point& x, const Point& x2, const SumStrategy& strategy) {
  return se_eval(x, x2, strategy.raw) + warped_eval(x, x2, strategy.warp, strategy.warped);
}

KernelChoice draw_kernel(double p_alt, double theta) {
  if (!(p_alt >= 0.0 && p_alt <= 1.0)) throw InvalidArgument("p_alt must lie in [0, 1]");
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgument("theta must lie in [0, 1]");
  return KernelChoice{theta <= p_alt ? KernelLabel::SE : KernelLabel::PHI, theta};
}

Kernel::Kernel(Form form, std::optional<KernelHyper> raw, std::optional<WarpFunction> warp,
               std::optional<KernelHyper> warped)
    : form_(form), raw_(std::move(raw)), warp_(std::move(warp)), warped_(std::move(warped)) {
  if (raw_) raw_->validate(raw_->lengthscales.size());
  if (warped_) warped_->validate(warp_->output_dim());
}

Kernel Kernel::squared_exponential(KernelHyper hyper) {
  return Kernel(Form::SquaredExponential, std::move(hyper), std::nullopt, std::nullopt);
}

Kernel Kernel::warped(WarpFunction warp, KernelHyper hyper) {
  return Kernel(Form::Warped, std::nullopt, std::move(warp), std::move(hyper));
}

Kernel Kernel::sum(KernelHyper raw, WarpFunction warp, KernelHyper warped) {
  return Kernel(Form::Sum, std::move(raw), std::move(warp), std::move(warped));
}

EmbeddedPoint Kernel::embed(const Point& x) const {
  if (raw_ && x.size() != raw_->lengthscales.size()) {
    throw InvalidArgument("point has dimension " + std::to_string(x.size()) + " but kernel expects " +
                          std::to_string(raw_->lengthscales.size()));
  }
  EmbeddedPoint e{x, {}};
  if (warp_) e.warped = (*warp_)(x);
  return e;
}

std::vector<EmbeddedPoint> Kernel::embed(std::span<const Point> xs) const {
  std::vector<EmbeddedPoint> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(embed(x));
  return out;
}

double Kernel::operator()(const Point& x, const Point& x2) const { return (*this)(embed(x), embed(x2)); }

double Kernel::operator()(const EmbeddedPoint& x, const EmbeddedPoint& x2) const {
  switch (form_) {
    case Form::SquaredExponential:
      return se_core(x.raw, x2.raw, *raw_);
    case Form::Warped:
      return se_core(x.warped, x2.warped, *warped_);
    case Form::Sum:
      return se_core(x.raw, x2.raw, *raw_) + se_core(x.warped, x2.warped, *warped_);
  }
  return 0.0;
}

double Kernel::diagonal() const noexcept {
  return (raw_ ? raw_->signal_variance : 0.0) + (warped_ ? warped_->signal_variance : 0.0);
}

Eigen::Index Kernel::parameter_count() const {
  Eigen::Index n = 0;
  if (raw_) n += 1 + raw_->lengthscales.size();
  if (warped_) n += 1 + warped_->lengthscales.size();
  return n;
}

Eigen::VectorXd Kernel::log_parameters() const {
  Eigen::VectorXd p(parameter_count());
  Eigen::Index k = 0;
  for (const auto* h : {&raw_, &warped_}) {
    if (!*h) continue;
    p(k++) = std::log((*h)->signal_variance);
    for (double l : (*h)->lengthscales) p(k++) = std::log(l);
  }
  return p;
}

Kernel Kernel::with_log_parameters(const Eigen::VectorXd& params) const {
  if (params.size() != parameter_count()) throw InvalidArgument("wrong hyperparameter vector length");
  Kernel out = *this;
  Eigen::Index k = 0;
  if (raw_) {
    out.raw_ = hyper_from_log(params, k, raw_->lengthscales.size());
    k += 1 + raw_->lengthscales.size();
  }
  if (warped_) out.warped_ = hyper_from_log(params, k, warped_->lengthscales.size());
  return out;
}

Eigen::VectorXd Kernel::contract_gradient(std::span<const EmbeddedPoint> points, const Eigen::MatrixXd& w) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(parameter_count());
  Eigen::Index offset = 0;
  if (raw_) {
    contract_se(points, false, *raw_, w, g, offset);
    offset += 1 + raw_->lengthscales.size();
  }
  if (warped_) contract_se(points, true, *warped_, w, g, offset);
  return g;
}

Eigen::MatrixXd gram(std::span<const EmbeddedPoint> points, const Kernel& kernel) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n == 0) throw InvalidArgument("gram matrix needs at least one point");
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    k(a, a) = kernel(points[a], points[a]);
    for (Eigen::Index b = a + 1; b < n; ++b) {
      k(a, b) = k(b, a) = kernel(points[a], points[b]);
    }
  }
  return k;
}

Eigen::MatrixXd gram(std::span<const Point> points, const Kernel& kernel) {
  if (points.empty()) throw InvalidArgument("gram matrix needs at least one point");
  const auto embedded = kernel.embed(points);
  return gram(std::span<const EmbeddedPoint>(embedded), kernel);
}

}  // namespace bobak
