#pragma once

#include <stdexcept>
#include <string>

namespace uavnoma {

// Raised when an iterative kernel runs out of budget. Carries the best
// estimate reached so callers can report it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

// Invalid configuration; the message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RankDeficiencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uavnoma
