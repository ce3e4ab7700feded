#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iraloc {

enum class ErrorCode {
  MalformedLine,
  InvalidSatId,
  InvalidBeamId,
  InvalidCoordinate,
  EmptyInput,
  IoFailure,
  DegenerateInput,
  InsufficientData,
  NonConvergence,
  InsufficientBrackets,
  NoBeamRecords,
  UnknownThreshold,
  InvalidPer,
  NonPositiveValue,
  InsufficientWindows,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace iraloc
