#pragma once

#include <stdexcept>
#include <string>

namespace symloss {

// Bad argument to a library call (empty input, out-of-range prior, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation not defined for the given loss (e.g. gradient of zero-one).
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Configuration problem: unknown names, missing files, vocabulary mismatch.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pseudo-labeling produced an empty side.
class DegenerateSplit : public std::runtime_error {
 public:
  DegenerateSplit(const std::string& what, double tau)
      : std::runtime_error(what), tau_(tau) {}
  double tau() const noexcept { return tau_; }

 private:
  double tau_;
};

}  // namespace symloss
