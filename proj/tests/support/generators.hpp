#pragma once

// Hand-rolled generators for property tests.

#include <cmath>
#include <random>
#include <vector>

#include "bobak/domain.hpp"
#include "bobak/gp.hpp"
#include "bobak/kernels.hpp"

namespace bobak::testing {

using Gen = std::mt19937_64;

inline double draw(Gen& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }
inline int draw_int(Gen& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

inline Point random_point(Gen& g, Eigen::Index d, double lo = -3.0, double hi = 3.0) {
  Point x(d);
  for (auto& v : x) v = draw(g, lo, hi);
  return x;
}

inline std::vector<Point> random_points(Gen& g, int n, Eigen::Index d, double lo = -3.0, double hi = 3.0) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back(random_point(g, d, lo, hi));
  return pts;
}

inline KernelHyper random_hyper(Gen& g, Eigen::Index d, double lo = 0.1, double hi = 10.0) {
  KernelHyper h;
  h.signal_variance = draw(g, lo, hi);
  h.lengthscales.resize(d);
  for (auto& l : h.lengthscales) l = draw(g, lo, hi);
  return h;
}

/// A generic 2-output warp: (sin of the first coordinate, squared norm / 10).
inline WarpFunction test_warp() {
  return WarpFunction("test_warp", 2, [](const Point& x) -> Eigen::VectorXd {
    Eigen::VectorXd w(2);
    w << std::sin(x(0)), x.squaredNorm() / 10.0;
    return w;
  });
}

/// Random SE, warped or sum kernel on dimension d.
inline Kernel random_kernel(Gen& g, Eigen::Index d, double lo = 0.1, double hi = 10.0) {
  switch (draw_int(g, 0, 2)) {
    case 0: return Kernel::squared_exponential(random_hyper(g, d, lo, hi));
    case 1: return Kernel::warped(test_warp(), random_hyper(g, 2, lo, hi));
    default: return Kernel::sum(random_hyper(g, d, lo, hi), test_warp(), random_hyper(g, 2, lo, hi));
  }
}

inline Dataset make_dataset(const std::vector<Point>& xs, const std::vector<double>& ys) {
  Dataset d;
  for (std::size_t i = 0; i < xs.size(); ++i) d.append(xs[i], ys[i]);
  return d;
}

/// n distinct random points with smooth random targets.
inline Dataset random_dataset(Gen& g, int n, Eigen::Index d) {
  Dataset data;
  const Point w = random_point(g, d, -1.0, 1.0);
  for (int i = 0; i < n; ++i) {
    Point x = random_point(g, d);
    data.append(x, std::sin(x.dot(w)) + 0.1 * x.squaredNorm() + draw(g, -0.1, 0.1));
  }
  return data;
}

}  // namespace bobak::testing
