#include "bobak/benchmarks.hpp"

#include <gtest/gtest.h>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "bobak/errors.hpp"
#include "generators.hpp"

namespace bobak::benchmarks {
namespace {

using bobak::testing::Gen;
using Big = boost::multiprecision::cpp_dec_float_50;

Point vec(std::initializer_list<double> v) {
  Point x(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), x.begin());
  return x;
}

Big big_ackley(const Point& x) {
  const Big pi = boost::math::constants::pi<Big>();
  Big sq = 0, cs = 0;
  for (double v : x) {
    const Big b(v);
    sq += b * b;
    cs += cos(2 * pi * b);
  }
  const Big d(static_cast<int>(x.size()));
  return -20 * exp(Big("-0.2") * sqrt(sq / d)) - exp(cs / d) + 20 + exp(Big(1));
}

Big big_rastrigin(const Point& x) {
  const Big pi = boost::math::constants::pi<Big>();
  Big total = 10 * static_cast<int>(x.size());
  for (double v : x) {
    const Big b(v);
    total += b * b - 10 * cos(2 * pi * b);
  }
  return total;
}

TEST(Ackley, Examples) {
  for (Eigen::Index d : {1, 2, 10}) EXPECT_NEAR(ackley(Point::Zero(d)), 0.0, 1e-12);
  EXPECT_NEAR(ackley(vec({1, 1})), 3.625384938440363, 1e-12);
  EXPECT_NEAR(ackley(vec({0.5})), 4.25365402656841155, 1e-12);
}

TEST(Rastrigin, Examples) {
  EXPECT_EQ(rastrigin(Point::Zero(10)), 0.0);
  EXPECT_NEAR(rastrigin(vec({1})), 1.0, 1e-12);
  EXPECT_NEAR(rastrigin(vec({0.5})), 20.25, 1e-12);
}

TEST(Warps, Examples) {
  EXPECT_EQ(ackley_warp(Point::Zero(3)), Eigen::Vector2d(0, 1));
  EXPECT_NEAR((ackley_warp(vec({1, 1})) - Eigen::Vector2d(-0.2, 1)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((ackley_warp(vec({0.5})) - Eigen::Vector2d(-0.1, -1)).norm(), 0.0, 1e-15);
  EXPECT_EQ(rastrigin_warp(Point::Zero(4)), Eigen::Vector2d(0, 40));
  EXPECT_NEAR((rastrigin_warp(vec({1})) - Eigen::Vector2d(1, 10)).norm(), 0.0, 1e-13);
  EXPECT_NEAR((rastrigin_warp(vec({0.5, 0.5})) - Eigen::Vector2d(0.5, -20)).norm(), 0.0, 1e-13);
}

TEST(Warps, WrappedFunctionsMatchFreeFunctions) {
  Gen g(3);
  const auto aw = make_ackley_warp();
  const auto rw = make_rastrigin_warp();
  EXPECT_EQ(aw.output_dim(), 2);
  for (int i = 0; i < 100; ++i) {
    const Point x = bobak::testing::random_point(g, 5);
    EXPECT_EQ(aw(x), Eigen::VectorXd(ackley_warp(x)));
    EXPECT_EQ(rw(x), Eigen::VectorXd(rastrigin_warp(x)));
  }
}

TEST(BenchmarkProperties, IdentityReconstruction) {
  Gen g(4);
  for (int i = 0; i < 2000; ++i) {
    const Eigen::Index d = bobak::testing::draw_int(g, 1, 10);
    const Point x = bobak::testing::random_point(g, d, -100, 100);
    const auto a = ackley_warp(x);
    EXPECT_NEAR(ackley(x), -20 * std::exp(a(0)) - std::exp(a(1)) + 20 + std::exp(1.0), 1e-12);
    const auto r = rastrigin_warp(x);
    EXPECT_NEAR(rastrigin(x), r(0) - r(1) + 10.0 * static_cast<double>(d), 1e-12 * (1.0 + rastrigin(x)));
    EXPECT_LE(a(0), 0.0);
    EXPECT_GE(a(1), -1.0);
    EXPECT_LE(a(1), 1.0);
    EXPECT_GE(r(0), 0.0);
    EXPECT_LE(std::abs(r(1)), 10.0 * static_cast<double>(d));
  }
}

TEST(BenchmarkProperties, PositiveAwayFromOrigin) {
  Gen g(5);
  for (const auto& name : setting_names()) {
    const auto s = make_setting(name);
    for (int i = 0; i < 100000 / 4; ++i) {
      const Point x = bobak::testing::random_point(g, s.dimension, s.domain.lower()(0), s.domain.upper()(0));
      ASSERT_FALSE(x.isZero(0.0));
      EXPECT_GT(s.function(x), 0.0);
    }
  }
}

TEST(BenchmarkProperties, HighPrecisionOracle) {
  Gen g(6);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Index d = bobak::testing::draw_int(g, 1, 10);
    const double half = i % 2 == 0 ? 10.0 : 100.0;
    const Point x = bobak::testing::random_point(g, d, -half, half);
    const double ea = big_ackley(x).convert_to<double>();
    EXPECT_NEAR(ackley(x), ea, 1e-10 * std::abs(ea));
    const Point xr = bobak::testing::random_point(g, d, -5, 5);
    const double er = big_rastrigin(xr).convert_to<double>();
    EXPECT_NEAR(rastrigin(xr), er, 1e-10 * std::abs(er));
  }
}

TEST(Settings, MatchTheFourPanels) {
  ASSERT_EQ(setting_names().size(), 4u);
  struct Expected {
    const char* name;
    Eigen::Index d;
    double half;
    int budget;
  };
  for (const auto& e : {Expected{"ackley2d_near", 2, 10, 80}, Expected{"ackley2d_far", 2, 100, 80},
                        Expected{"ackley10d", 10, 10, 100}, Expected{"rastrigin10d", 10, 5, 100}}) {
    const auto s = make_setting(e.name);
    EXPECT_EQ(s.name, e.name);
    EXPECT_EQ(s.dimension, e.d);
    EXPECT_EQ(s.domain.lower(), Eigen::VectorXd::Constant(e.d, -e.half));
    EXPECT_EQ(s.domain.upper(), Eigen::VectorXd::Constant(e.d, e.half));
    EXPECT_EQ(s.default_budget, e.budget);
    const auto obj = s.objective();
    EXPECT_EQ(obj.name, e.name);
    ASSERT_TRUE(obj.warp.has_value());
    EXPECT_EQ(obj.known_optimum, 0.0);
    Gen g(7);
    for (int i = 0; i < 1000; ++i) {
      const Point x = bobak::testing::random_point(g, e.d, -e.half, e.half);
      const auto w1 = (*obj.warp)(x);
      EXPECT_TRUE(w1.allFinite());
      EXPECT_EQ(w1, (*obj.warp)(x));
      EXPECT_EQ(obj.evaluate(x), s.function(x));
    }
  }
  EXPECT_THROW(make_setting("easom"), InvalidArgument);
}

TEST(Normalization, CostExamples) {
  EXPECT_EQ(normalized_cost(0.0, 22.0), 0.0);
  EXPECT_EQ(normalized_cost(22.0, 22.0), 1.0);
  EXPECT_EQ(normalized_cost(11.0, 22.0), 0.5);
  EXPECT_EQ(normalized_cost(30.0, 22.0), 1.0);
  EXPECT_EQ(normalized_cost(-1.0, 22.0), 0.0);
}

TEST(Normalization, CachedConstantIsTheDefaultEstimate) {
  const auto s = make_setting("ackley2d_near");
  const double y_max = normalization_constant(s);
  EXPECT_EQ(y_max, normalization_constant(s));
  EXPECT_EQ(y_max, estimate_normalization(s));
  EXPECT_GE(y_max, estimate_normalization(s, 1000, 1));
  EXPECT_LT(y_max, 20.0 + std::exp(1.0));
  EXPECT_EQ(normalized_cost(s, y_max / 2), 0.5);
}

}  // namespace
}  // namespace bobak::benchmarks
