#pragma once

#include <stdexcept>
#include <string>

namespace plspread {

/// Invalid parameter or configuration (exit code 3 at the CLI).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters outside the regime where a construction is defined.
class UnsupportedRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The right-hand side was evaluated at z <= 0.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root bracketing failed (no sign change in the search interval).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A continuation in delta did not converge or was not monotone.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::string trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::string& trace() const noexcept { return trace_; }

 private:
  std::string trace_;
};

/// Explicit time step above the stability bound.
class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NaN/Inf or other unrecoverable numeric failure.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace plspread
