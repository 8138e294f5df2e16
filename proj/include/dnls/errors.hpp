#pragma once

#include <stdexcept>
#include <string>

namespace dnls {

/// Bad argument or violated precondition (exit code 1, DNLS_INVALID_ARGUMENT).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration text that fails validation. Carries the offending line.
class ConfigError : public std::runtime_error {
public:
  ConfigError(int line, const std::string& detail, const std::string& source = {})
      : std::runtime_error((source.empty() ? "" : source + ": ") +
                           (line > 0 ? "line " + std::to_string(line) + ": " : "") + detail),
        line_(line),
        detail_(detail) {}
  int line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  int line_;
  std::string detail_;
};

/// File-system failure; message includes the path.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A run aborted: NaN/Inf detected, mass grew beyond tolerance.
class SimulationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace dnls
