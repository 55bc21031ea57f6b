#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace okbim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Grid size is not a power of two (or too small) or sample lengths disagree.
class GridError : public Error {
public:
  using Error::Error;
};

/// Degenerate or invalid curve / system geometry.
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Iterative solve did not reach the requested tolerance.
class SolverError : public Error {
public:
  SolverError(const std::string& what, std::vector<double> best_iterate, double residual)
      : Error(what), best_iterate_(std::move(best_iterate)), residual_(residual) {}

  const std::vector<double>& best_iterate() const noexcept { return best_iterate_; }
  double residual() const noexcept { return residual_; }

private:
  std::vector<double> best_iterate_;
  double residual_;
};

/// Malformed scenario file, unknown preset, or failed scenario validation.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace okbim
