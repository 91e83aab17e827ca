#pragma once

#include <stdexcept>
#include <string>

namespace bikemono {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A curve (or curve spec) violates its construction contract.
struct CurveSpecError : Error {
  using Error::Error;
};

/// Zero/vanishing derivative where an immersion is required.
struct ImmersionError : Error {
  using Error::Error;
};

/// A sampling-dependent quantity did not stabilize at the resolution cap.
struct SamplingError : Error {
  using Error::Error;
};

/// Classification margin too small for the requested operation.
struct MarginalClassification : Error {
  double margin;
  explicit MarginalClassification(double m, const std::string& what)
      : Error(what), margin(m) {}
};

struct NumericError : Error {
  using Error::Error;
};

}  // namespace bikemono
