#pragma once

#include <stdexcept>
#include <string>

namespace profmon {

// Base class for every error raised by the library. Callers that only need
// to distinguish "bad input" from "calibration failed" can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All design points share one x value, so s_xx == 0 and no slope is defined.
class DegenerateDesign final : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch final : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite final : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange final : public Error {
 public:
  using Error::Error;
};

// Calibration could not bracket the requested in-control ARL inside the
// admissible range of the limit multiplier.
class NoBracket final : public Error {
 public:
  using Error::Error;
};

}  // namespace profmon
