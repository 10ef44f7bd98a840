#pragma once

#include <functional>
#include <optional>
#include <string>

#include "bobak/domain.hpp"
#include "bobak/kernels.hpp"

namespace bobak {

/// A cost function to minimize over a box, optionally with an informed warp.
struct ObjectiveSpec {
  std::string name;
  Domain domain;
  std::function<double(const Point&)> evaluate;
  std::optional<WarpFunction> warp;
  std::optional<double> known_optimum;

  Eigen::Index dimension() const noexcept { return domain.dimension(); }
};

}  // namespace bobak
