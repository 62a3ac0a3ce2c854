#ifndef CADFLOW_ERRORS_HPP
#define CADFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cadflow {

// Invalid configuration input (non-positive rate, p == 2, bad weights, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside an operation's domain (query beyond horizon, grid mismatch).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite value where a finite one is required.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative solver failure; carries the residual trace for diagnostics.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}

  const std::vector<double>& residual_trace() const { return trace_; }
  double final_residual() const { return trace_.empty() ? 0.0 : trace_.back(); }

 private:
  std::vector<double> trace_;
};

}  // namespace cadflow

#endif
