#pragma once

// Reference GP posterior computed with an explicit dense inverse, independent of the
// Cholesky path in the library.

#include <cmath>
#include <numbers>
#include <span>

#include <Eigen/Dense>

#include "bobak/domain.hpp"
#include "bobak/gp.hpp"
#include "bobak/kernels.hpp"

namespace bobak::testing {

inline Eigen::MatrixXd dense_system(const Dataset& data, const Kernel& kernel, double noise) {
  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kernel(data.points()[i], data.points()[j]);
  }
  k.diagonal().array() += noise;
  return k;
}

inline Prediction dense_predict(const Dataset& data, const Kernel& kernel, double noise, const Point& x) {
  const Eigen::MatrixXd inv = dense_system(data, kernel, noise).inverse();
  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::VectorXd ks(n);
  for (Eigen::Index i = 0; i < n; ++i) ks(i) = kernel(data.points()[i], x);
  const Eigen::VectorXd y = data.targets();
  const double ybar = y.mean();
  const Eigen::VectorXd yc = y.array() - ybar;
  return {ybar + ks.dot(inv * yc), kernel(x, x) - ks.dot(inv * ks)};
}

inline double dense_lml(const Dataset& data, const Kernel& kernel, double noise) {
  const Eigen::MatrixXd a = dense_system(data, kernel, noise);
  const Eigen::VectorXd y = data.targets();
  const Eigen::VectorXd yc = y.array() - y.mean();
  const double n = static_cast<double>(data.size());
  return -0.5 * yc.dot(a.inverse() * yc) - 0.5 * std::log(a.determinant()) - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

}  // namespace bobak::testing
