#pragma once

#include <stdexcept>
#include <string>

namespace pmax {

enum class ErrorKind {
  Spec,           // invalid model or run configuration
  Domain,         // argument outside an operation's domain
  Estimation,     // estimator has no usable data
  Numeric,        // factorization or solver failure
  Truncation,     // spectral series did not reach its stopping rule
  Precision,      // survival values underflowed or lost monotonicity
  Io,
  Unimplemented,  // no closed form for the requested model/regime
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SpecError : public Error {
 public:
  explicit SpecError(const std::string& what) : Error(ErrorKind::Spec, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class EstimationError : public Error {
 public:
  explicit EstimationError(const std::string& what) : Error(ErrorKind::Estimation, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double achieved_bound)
      : Error(ErrorKind::Truncation, what), achieved_bound_(achieved_bound) {}
  /// Ratio of the next point's scaled bound to the running field minimum when the cap hit.
  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  double achieved_bound_;
};

class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what) : Error(ErrorKind::Precision, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class UnimplementedModelError : public Error {
 public:
  explicit UnimplementedModelError(const std::string& what) : Error(ErrorKind::Unimplemented, what) {}
};

}  // namespace pmax
