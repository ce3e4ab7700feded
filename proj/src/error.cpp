#include "iraloc/error.hpp"

namespace iraloc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::InvalidSatId: return "InvalidSatId";
    case ErrorCode::InvalidBeamId: return "InvalidBeamId";
    case ErrorCode::InvalidCoordinate: return "InvalidCoordinate";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InsufficientBrackets: return "InsufficientBrackets";
    case ErrorCode::NoBeamRecords: return "NoBeamRecords";
    case ErrorCode::UnknownThreshold: return "UnknownThreshold";
    case ErrorCode::InvalidPer: return "InvalidPer";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::InsufficientWindows: return "InsufficientWindows";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace iraloc
