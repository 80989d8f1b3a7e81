#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace medfem {

// Exit-code taxonomy used by the CLI; library code throws, main() maps.
enum class ExitCode : int {
  ok = 0,
  unexpected = 1,
  config = 2,
  validation = 3,
  non_convergence = 4,
  numeric = 5,
  io = 6,
};

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual ExitCode exit_code() const { return ExitCode::unexpected; }
};

class InvalidParameterError : public Error {
public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::config; }
};

class InvalidDomainError : public Error {
public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::config; }
};

class ConfigError : public Error {
public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::config; }
};

class ValidationError : public Error {
public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::validation; }
};

class CompatibilityError : public Error {
public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::validation; }
};

// Non-finite value met during a numeric operation; carries the element index
// when the failure is localized.
class NumericError : public Error {
public:
  explicit NumericError(const std::string& what, long element_index = -1)
      : Error(what), element_index_(element_index) {}
  long element_index() const { return element_index_; }
  ExitCode exit_code() const override { return ExitCode::numeric; }

private:
  long element_index_;
};

// Newton stagnation or Picard divergence; carries the residual/distance
// history so callers can report what happened instead of guessing.
class NonConvergenceError : public Error {
public:
  NonConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }
  ExitCode exit_code() const override { return ExitCode::non_convergence; }

private:
  std::vector<double> history_;
};

class IoError : public Error {
public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::io; }
};

}  // namespace medfem
