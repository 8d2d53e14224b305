#pragma once

#include <stdexcept>
#include <string>

namespace swucrl {

/// Invalid argument or malformed input (CLI exit code 2).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation invoked out of order, e.g. stepping an environment past its horizon.
class SequencingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An iterative solver hit its iteration cap. `achieved_span` is the last
/// span (or residual) reached before giving up.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved_span)
      : std::runtime_error(what), achieved_span_(achieved_span) {}

  double achieved_span() const noexcept { return achieved_span_; }

 private:
  double achieved_span_;
};

/// Some state cannot reach some other state under any policy.
class InfiniteDiameterError : public NumericError {
 public:
  using NumericError::NumericError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swucrl
