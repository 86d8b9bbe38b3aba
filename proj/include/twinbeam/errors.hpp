#pragma once

#include <stdexcept>
#include <string>

namespace twinbeam {

/// Invalid physical parameter or argument outside a function's supported range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative or adaptive numerical procedure did not reach its tolerance.
/// Carries the best estimate obtained so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double achieved_error)
      : std::runtime_error(what), best_estimate_(best_estimate), achieved_error_(achieved_error) {}

  double best_estimate() const { return best_estimate_; }
  double achieved_error() const { return achieved_error_; }

 private:
  double best_estimate_;
  double achieved_error_;
};

/// A grid or sampling choice cannot represent the requested field
/// (Fresnel chirp undersampled, energy at the boundary, truncated marginal).
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An output that is identically zero or otherwise carries no information
/// (all-zero distribution map, profile without a 1/e^2 crossing).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration error with the dotted path of the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(what), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace twinbeam
