#pragma once

#include <stdexcept>
#include <string>

namespace codesign {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidRange : Error {
  using Error::Error;
};
struct GridExhausted : Error {
  using Error::Error;
};
struct IdOutOfRange : Error {
  using Error::Error;
};
struct MalformedFile : Error {
  MalformedFile(const std::string& path, int line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), line_number(line) {}
  int line_number;
};
struct KTooLarge : Error {
  using Error::Error;
};
struct DegenerateDuration : Error {
  using Error::Error;
};
struct GimbalLock : Error {
  using Error::Error;
};
struct NoEquilibrium : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};
struct StepFailed : Error {
  using Error::Error;
};
struct EmptyFeasibleSet : Error {
  using Error::Error;
};
struct EvaluatorFailure : Error {
  using Error::Error;
};
struct ProvenanceMismatch : Error {
  using Error::Error;
};
struct RunLocked : Error {
  using Error::Error;
};

}  // namespace codesign
