#pragma once

#include <string>

#include <Eigen/Core>

namespace bobak {

/// A point in the search space (or in a warp's output space).
using Point = Eigen::VectorXd;

/// Axis-aligned box bounds; lower(i) < upper(i) for every dimension.
class Domain {
 public:
  Domain() = default;
  Domain(Eigen::VectorXd lower, Eigen::VectorXd upper);

  /// Same interval [lo, hi] in every one of `dimension` coordinates.
  static Domain cube(Eigen::Index dimension, double lo, double hi);

  Eigen::Index dimension() const noexcept { return lower_.size(); }
  const Eigen::VectorXd& lower() const noexcept { return lower_; }
  const Eigen::VectorXd& upper() const noexcept { return upper_; }
  Eigen::VectorXd widths() const { return upper_ - lower_; }

  bool contains(const Point& x) const;
  Point clip(const Point& x) const;

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

std::string format_point(const Point& x);

}  // namespace bobak
