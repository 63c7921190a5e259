#pragma once

#include <stdexcept>
#include <string>

namespace beamlab {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidCoefficientError : public Error {
 public:
  using Error::Error;
};

class NumericalIntegrationError : public Error {
 public:
  using Error::Error;
};

class InvalidModelError : public Error {
 public:
  using Error::Error;
};

class NumericalOverflowError : public Error {
 public:
  using Error::Error;
};

/// A field that must integrate to zero does not (decomposition or domain failure).
class ZeroMeanViolationError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class LogDomainError : public Error {
 public:
  using Error::Error;
};

class UndefinedProfileError : public Error {
 public:
  using Error::Error;
};

class InvalidConfigError : public Error {
 public:
  using Error::Error;
};

class OutOfRegionError : public Error {
 public:
  using Error::Error;
};

/// The scaled y-grid image does not fit inside the physical x-grid.
class DomainTruncationError : public Error {
 public:
  using Error::Error;
};

/// A result file carries a schema major version this build does not understand.
class SchemaVersionError : public Error {
 public:
  using Error::Error;
};

/// Adaptive step size fell below the underflow floor.
class StiffnessFailureError : public Error {
 public:
  StiffnessFailureError(const std::string& what, double t, double dt)
      : Error(what), t_(t), dt_(dt) {}
  double time() const noexcept { return t_; }
  double step() const noexcept { return dt_; }

 private:
  double t_;
  double dt_;
};

/// Field sup-norm exceeded the blow-up threshold or became non-finite.
class BlowUpDetectedError : public Error {
 public:
  BlowUpDetectedError(const std::string& what, double t, double sup_norm)
      : Error(what), t_(t), sup_(sup_norm) {}
  double time() const noexcept { return t_; }
  double sup_norm() const noexcept { return sup_; }

 private:
  double t_;
  double sup_;
};

}  // namespace beamlab
