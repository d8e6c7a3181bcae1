#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace bolab {

/// Short %g rendering for messages.
inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array lengths or grids that do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on data violating its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or parameter outside its admissible range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Base of failures that come from the numerics rather than the inputs.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& reason, double time,
              const std::string& suffix = "")
      : NumericalError(reason + " at t=" + fmt_g(time) + suffix),
        reason_(reason),
        time_(time) {}
  const std::string& reason() const noexcept { return reason_; }
  double time() const noexcept { return time_; }

 private:
  std::string reason_;
  double time_;
};

class ConservationError : public NumericalError {
 public:
  ConservationError(const std::string& invariant, double time, double drift,
                    const std::string& suffix = "")
      : NumericalError("conservation violated: " + invariant + " drift " +
                       fmt_g(drift) + " at t=" + fmt_g(time) + suffix),
        invariant_(invariant),
        time_(time),
        drift_(drift) {}
  const std::string& invariant() const noexcept { return invariant_; }
  double time() const noexcept { return time_; }
  double drift() const noexcept { return drift_; }

 private:
  std::string invariant_;
  double time_;
  double drift_;
};

/// A ratio whose denominator vanished.
class UndefinedRatioError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace bolab
