#ifndef LIISS_CORE_ERRORS_HPP
#define LIISS_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace liiss {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  NonConvergence,
  TargetOutOfRange,
  StepUnderflow,
  SingularPivot,
  NoAdmissibleRegion,
  OutOfRegion,
  DimensionMismatch,
  EpsOutOfRange,
  DegenerateInput,
  Internal,
};

constexpr const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:   return "InvalidArgument";
    case ErrorCode::Parse:             return "Parse";
    case ErrorCode::NonConvergence:    return "NonConvergence";
    case ErrorCode::TargetOutOfRange:  return "TargetOutOfRange";
    case ErrorCode::StepUnderflow:     return "StepUnderflow";
    case ErrorCode::SingularPivot:     return "SingularPivot";
    case ErrorCode::NoAdmissibleRegion:return "NoAdmissibleRegion";
    case ErrorCode::OutOfRegion:       return "OutOfRegion";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EpsOutOfRange:     return "EpsOutOfRange";
    case ErrorCode::DegenerateInput:   return "DegenerateInput";
    case ErrorCode::Internal:          return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace liiss

#endif
