#pragma once

#include <stdexcept>
#include <string>

namespace vexs {

// Argument outside the mathematical domain of an operation (p < 1, x at a
// declared singular point, s outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The requested combination is not supported, e.g. truncating the domain for
// a field that does not decay.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A modular, integral or maximal average diverged.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::string operation, const std::string& what)
      : std::runtime_error(operation + ": " + what), operation_(std::move(operation)) {}

  const std::string& operation() const noexcept { return operation_; }

 private:
  std::string operation_;
};

// A numerical routine reached a state its own invariants rule out (a sign
// change the bracketing grid detected could not be isolated, NaN in a root
// bracket, ...). Usually means the discretization is too coarse.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Invalid scenario configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace vexs
