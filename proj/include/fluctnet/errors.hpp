#pragma once

#include <stdexcept>
#include <string>

namespace fluctnet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// invalid network description
struct ModelError : Error { using Error::Error; };
// linear algebra breakdown (singular solves, non-finite input)
struct NumericError : Error { using Error::Error; };
// alpha outside the admissible interval
struct DomainError : Error { using Error::Error; };
struct SpectralGapError : NumericError { using NumericError::NumericError; };
struct DegenerateSubspaceError : NumericError {
  DegenerateSubspaceError(const std::string& what, double cond)
      : NumericError(what), condition(cond) {}
  double condition;
};
struct AccuracyError : NumericError {
  AccuracyError(const std::string& what, double achieved)
      : NumericError(what), error_bound(achieved) {}
  double error_bound;
};
struct ArgumentError : Error { using Error::Error; };
struct ResolutionError : Error { using Error::Error; };

}  // namespace fluctnet
