#pragma once

#include <stdexcept>
#include <string>

namespace pde2ode {

enum class ErrorCode {
  Syntax,
  UnknownSymbol,
  BadArity,
  DivZero,
  NoDerivative,
  NonTermination,
  Inconsistent,
  Infinite,
  NotClosed,
  NotLinear,
  NotCommuting,
  EigenFail,
  Pivot,
  ProjectFail,
  PivotAtPoint,
  Io,
  Usage,
};

const char* error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pde2ode
