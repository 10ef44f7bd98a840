#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace bobak {

/// Precondition violated by the caller (dimension mismatch, out-of-range probability, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear algebra could not be completed, e.g. a Gram matrix stayed indefinite after maximum jitter.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A warp or objective produced a non-finite value. Carries the offending input.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, Eigen::VectorXd input)
      : std::runtime_error(what), input_(std::move(input)) {}

  const Eigen::VectorXd& input() const noexcept { return input_; }

 private:
  Eigen::VectorXd input_;
};

/// Bad experiment configuration: unknown setting or strategy, malformed file, ...
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bobak
