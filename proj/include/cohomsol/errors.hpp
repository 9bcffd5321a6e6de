#pragma once

#include <stdexcept>
#include <string>

namespace cohomsol {

/// Error categories. The CLI maps them onto exit codes.
enum class ErrorKind {
  Validation,   // malformed input or violated precondition on user data
  Certificate,  // a consistency / residual certificate failed
  Numerical,    // the numerics could not proceed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define COHOMSOL_DEFINE_ERROR(Name, Kind)                                         \
  class Name : public Error {                                                     \
   public:                                                                        \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, #Name ": " + what) {} \
  };

COHOMSOL_DEFINE_ERROR(GeometryError, Validation)
COHOMSOL_DEFINE_ERROR(InvalidInitialData, Validation)
COHOMSOL_DEFINE_ERROR(NonDiagonalRicci, Validation)
COHOMSOL_DEFINE_ERROR(NonScalarCasimir, Validation)
COHOMSOL_DEFINE_ERROR(SingularMetric, Numerical)
COHOMSOL_DEFINE_ERROR(SingularTime, Numerical)
COHOMSOL_DEFINE_ERROR(ZeroLeadingCoefficient, Numerical)
COHOMSOL_DEFINE_ERROR(LeadTooSingular, Numerical)
COHOMSOL_DEFINE_ERROR(SeriesOrderExceeded, Numerical)
COHOMSOL_DEFINE_ERROR(StepSizeUnderflow, Numerical)
COHOMSOL_DEFINE_ERROR(InitialConditionViolated, Certificate)
COHOMSOL_DEFINE_ERROR(ConsistencyViolated, Certificate)
COHOMSOL_DEFINE_ERROR(ParityViolated, Certificate)
COHOMSOL_DEFINE_ERROR(StabilizationNotReached, Certificate)

#undef COHOMSOL_DEFINE_ERROR

}  // namespace cohomsol
