#pragma once

#include <stdexcept>
#include <string>

namespace stochopt {

enum class ErrorKind {
  CapExceeded,
  Infeasible,
  Disconnected,
  Unbounded,
  NumericalFailure,
  NotMonotone,
  NotSubmodular,
  DegenerateInstance,
  UncertifiedScheme,
  SchemaError,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// Every failure the library reports carries one of the kinds above, so the
/// CLI can map it onto an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace stochopt
