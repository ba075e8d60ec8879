#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fatou {

enum class ErrorKind {
  ZeroForm,
  BadOrder,
  NonFinite,
  SmallDivisor,
  CalibrationFailed,
  SingularSample,
  NotOnCurve,
  DegenerateDirection,
  DegenerateFamily,
  TrackingAmbiguity,
  Parse,
  Precondition,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so front ends can map
// it to an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fatou
