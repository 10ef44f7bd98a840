#include "bobak/acquisition.hpp"

#include <gtest/gtest.h>

#include <random>

#include "bobak/errors.hpp"
#include "generators.hpp"

namespace bobak {
namespace {

using testing::Gen;

Point pt1(double v) { return Point::Constant(1, v); }

PosteriorModel two_point_model() {
  return fit_posterior(testing::make_dataset({pt1(0), pt1(1)}, {1.0, 0.0}),
                       Kernel::squared_exponential(KernelHyper::isotropic(1, 0.3)), 0.0);
}

double mc_expected_improvement(double mean, double sd, double best, Gen& g, int samples) {
  std::normal_distribution<double> normal(mean, sd);
  double total = 0.0;
  for (int i = 0; i < samples; ++i) total += std::max(best - normal(g), 0.0);
  return total / samples;
}

TEST(ExpectedImprovement, Examples) {
  EXPECT_EQ(expected_improvement({1.0, 0.0}, 1.0), 0.0);
  EXPECT_EQ(expected_improvement({2.0, 0.0}, 1.0), 0.0);
  EXPECT_EQ(expected_improvement({0.25, 0.0}, 1.0), 0.75);
  EXPECT_NEAR(expected_improvement({3.0, 1.0}, 3.0), 0.3989422804014327, 1e-15);
  EXPECT_NEAR(expected_improvement({0.0, 1.0}, 0.5), 0.6977965574013060, 1e-14);
}

TEST(ExpectedImprovement, MonteCarloAgreementAtReferencePoint) {
  Gen g(5);
  EXPECT_NEAR(expected_improvement({0.0, 1.0}, 0.5), mc_expected_improvement(0.0, 1.0, 0.5, g, 1'000'000), 1e-2);
}

TEST(ExpectedImprovement, MonteCarloAgreementRandomTriples) {
  Gen g(6);
  for (int i = 0; i < 20; ++i) {
    const double mean = testing::draw(g, -2, 2);
    const double var = testing::draw(g, 0.01, 4.0);
    const double best = testing::draw(g, -2, 2);
    const double mc = mc_expected_improvement(mean, std::sqrt(var), best, g, 1'000'000);
    EXPECT_NEAR(expected_improvement({mean, var}, best), mc, 1e-2) << mean << " " << var << " " << best;
  }
}

TEST(ExpectedImprovement, NonNegativeEverywhere) {
  Gen g(7);
  for (int i = 0; i < 10000; ++i) {
    const Prediction p{testing::draw(g, -100, 100), std::pow(10.0, testing::draw(g, -20, 4))};
    EXPECT_GE(expected_improvement(p, testing::draw(g, -100, 100)), 0.0);
  }
}

TEST(Lcb, Examples) {
  EXPECT_EQ(lcb({0.0, 1.0}, 2.0), -2.0);
  EXPECT_EQ(lcb({0.7, 0.0}, 2.0), 0.7);
  EXPECT_NEAR(lcb({0.7, 4.0}, 1e-12), 0.7, 1e-11);
  const auto prior = predict_prior(Kernel::squared_exponential(KernelHyper::isotropic(1, 1.0)), pt1(0.0));
  EXPECT_EQ(lcb(prior, 2.0), -2.0);
}

TEST(AcquisitionConfig, Validation) {
  AcquisitionConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.candidate_count = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.refine_steps = -1;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.kind = AcquisitionKind::LowerConfidenceBound;
  cfg.beta = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(AcquisitionKind, ParsesNames) {
  EXPECT_EQ(parse_acquisition_kind("EI"), AcquisitionKind::ExpectedImprovement);
  EXPECT_EQ(parse_acquisition_kind("lcb"), AcquisitionKind::LowerConfidenceBound);
  EXPECT_EQ(to_string(AcquisitionKind::LowerConfidenceBound), "lcb");
  EXPECT_THROW(parse_acquisition_kind("ucb"), InvalidArgument);
}

TEST(ProposeNext, SingleCandidateIsReturnedAsIs) {
  const auto model = two_point_model();
  const Domain domain = Domain::cube(1, -2.0, 3.0);
  for (auto kind : {AcquisitionKind::ExpectedImprovement, AcquisitionKind::LowerConfidenceBound}) {
    AcquisitionConfig cfg;
    cfg.kind = kind;
    cfg.candidate_count = 1;
    cfg.refine_steps = 0;
    Rng rng = make_stream(3, Stream::Acquisition);
    Rng mirror = rng;
    EXPECT_EQ(propose_next(model, domain, cfg, rng), uniform_point(domain, mirror));
  }
}

TEST(ProposeNext, BeatsTrainingPointsOnEi) {
  const auto model = two_point_model();
  Rng rng = make_stream(1, Stream::Acquisition);
  const Point x = propose_next(model, Domain::cube(1, -1.0, 2.0), {}, rng);
  const double ei = expected_improvement(model.predict(x), model.best_y());
  EXPECT_GE(ei, expected_improvement(model.predict(pt1(0)), model.best_y()));
  EXPECT_GE(ei, expected_improvement(model.predict(pt1(1)), model.best_y()));
  EXPECT_GT(ei, 0.0);
}

TEST(ProposeNext, EiVanishesAtTrainingPointsNoBetterThanBest) {
  const auto model = two_point_model();
  EXPECT_NEAR(expected_improvement(model.predict(pt1(0)), model.best_y()), 0.0, 1e-8);
  EXPECT_NEAR(expected_improvement(model.predict(pt1(1)), model.best_y()), 0.0, 1e-8);
}

TEST(ProposeNext, DeterministicForSameStreamState) {
  const auto model = two_point_model();
  const Domain domain = Domain::cube(1, -1.0, 2.0);
  Rng a = make_stream(11, Stream::Acquisition);
  Rng b = make_stream(11, Stream::Acquisition);
  EXPECT_EQ(propose_next(model, domain, {}, a), propose_next(model, domain, {}, b));
  EXPECT_EQ(a, b);
}

TEST(AcquisitionProperties, ArgmaxDominanceAndContainment) {
  Gen g(8);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index d = testing::draw_int(g, 1, 4);
    Eigen::VectorXd lo(d), hi(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      lo(i) = testing::draw(g, -5, 0);
      hi(i) = lo(i) + testing::draw(g, 0.5, 6);
    }
    const Domain domain(lo, hi);
    Dataset data;
    for (int i = 0; i < testing::draw_int(g, 1, 8); ++i) {
      Rng r = make_stream(static_cast<std::uint64_t>(100 * trial + i), Stream::Init);
      const Point x = uniform_point(domain, r);
      data.append(x, std::sin(x.sum()) + x.squaredNorm() / 10);
    }
    const auto model = fit_posterior(data, testing::random_kernel(g, d, 0.3, 3.0), 1e-4);
    AcquisitionConfig cfg;
    cfg.kind = trial % 2 == 0 ? AcquisitionKind::ExpectedImprovement : AcquisitionKind::LowerConfidenceBound;
    cfg.candidate_count = 200;
    cfg.refine_steps = testing::draw_int(g, 0, 20);

    Rng rng = make_stream(static_cast<std::uint64_t>(trial), Stream::Acquisition);
    Rng mirror = rng;
    const Point x = propose_next(model, domain, cfg, rng);
    EXPECT_TRUE(domain.contains(x));
    const double chosen = acquisition_utility(model.predict(x), model.best_y(), cfg);
    for (int i = 0; i < cfg.candidate_count; ++i) {
      const double u = acquisition_utility(model.predict(uniform_point(domain, mirror)), model.best_y(), cfg);
      EXPECT_GE(chosen, u - 1e-12 * (1.0 + std::abs(u)));
    }
  }
}

TEST(AcquisitionProperties, ContainedOnTinyAndHugeBoxes) {
  const auto data = testing::make_dataset({Point::Zero(2)}, {1.0});
  const auto model = fit_posterior(data, Kernel::squared_exponential(KernelHyper::isotropic(2, 1.0)), 1e-4);
  for (double half : {1e-6, 1.0, 1e6}) {
    const Domain domain = Domain::cube(2, -half, half);
    for (std::uint64_t s = 0; s < 10; ++s) {
      Rng rng = make_stream(s, Stream::Acquisition);
      AcquisitionConfig cfg;
      cfg.candidate_count = 50;
      EXPECT_TRUE(domain.contains(propose_next(model, domain, cfg, rng)));
    }
  }
}

}  // namespace
}  // namespace bobak
