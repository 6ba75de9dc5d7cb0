#pragma once

#include <stdexcept>
#include <string>

namespace chainecho {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class DiagonalizationError : public Error {
public:
  using Error::Error;
};

/// An echo value fell outside [0, 1] by more than the allowed slack, or a
/// determinant was not finite.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// The many-body ground state used as the initial environment state is
/// (numerically) degenerate, so the oracle refuses to pick one.
class DegenerateGroundState : public Error {
public:
  using Error::Error;
};

class FitError : public Error {
public:
  using Error::Error;
};

/// Parse or validation failure in an experiment configuration. `line` is
/// 1-based, or 0 when the problem is not tied to a line.
class ConfigError : public Error {
public:
  ConfigError(const std::string &what, int line = 0, std::string field = {})
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line), field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string &field() const noexcept { return field_; }

private:
  int line_;
  std::string field_;
};

} // namespace chainecho
