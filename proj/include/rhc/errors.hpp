#pragma once

#include <stdexcept>
#include <string>

namespace rhc {

/// Bad input to a library call (size mismatch, out-of-range parameter).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what, int iterations = 0)
      : std::runtime_error(what), iterations_(iterations) {}

  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

class CalibrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration problems. `line` is 0 when the error is not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key, int line = 0)
      : std::runtime_error(what), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

}  // namespace rhc
