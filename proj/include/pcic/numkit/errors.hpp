#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcic {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed call: empty input, mismatched lengths, out-of-range index.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Invalid distribution or model parameter (non-positive scale, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input values that violate a data contract (NaN, +inf, nonpositive weight).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Generic numerical failure, e.g. a singular or badly conditioned matrix.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorisation hit a non-positive pivot.
class DecompositionError : public NumericalError {
 public:
  DecompositionError(const std::string& what, std::size_t pivot)
      : NumericalError(what), pivot_(pivot) {}
  std::size_t pivot_index() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// Optimiser did not converge; carries the best point seen.
class EstimationError : public Error {
 public:
  EstimationError(const std::string& what, std::vector<double> best)
      : Error(what), best_(std::move(best)) {}
  const std::vector<double>& best_point() const noexcept { return best_; }

 private:
  std::vector<double> best_;
};

/// Sampler could not start (log target is -inf at the initial point).
class InitializationError : public Error {
 public:
  using Error::Error;
};

/// Log target returned NaN during sampling.
class TargetError : public Error {
 public:
  TargetError(const std::string& what, std::vector<double> theta)
      : Error(what), theta_(std::move(theta)) {}
  const std::vector<double>& theta() const noexcept { return theta_; }

 private:
  std::vector<double> theta_;
};

/// Invalid run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcic
