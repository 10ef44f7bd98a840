#include "bobak/domain.hpp"

#include <cmath>
#include <cstdio>

#include "bobak/errors.hpp"

namespace bobak {

Domain::Domain(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0) {
    throw InvalidArgument("domain bounds must be nonempty and of equal length");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(lower_(i) < upper_(i)) || !std::isfinite(lower_(i)) || !std::isfinite(upper_(i))) {
      throw InvalidArgument("domain bounds need finite lower < upper in every dimension");
    }
  }
}

Domain Domain::cube(Eigen::Index dimension, double lo, double hi) {
  return Domain(Eigen::VectorXd::Constant(dimension, lo), Eigen::VectorXd::Constant(dimension, hi));
}

bool Domain::contains(const Point& x) const {
  if (x.size() != dimension()) return false;
  return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
}

Point Domain::clip(const Point& x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }

std::string format_point(const Point& x) {
  std::string out = "(";
  char buf[32];
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.17g", i ? ", " : "", x(i));
    out += buf;
  }
  return out + ")";
}

}  // namespace bobak
