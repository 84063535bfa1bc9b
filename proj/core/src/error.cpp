#include "rdwkit/error.hpp"

namespace rdwkit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptySingularSet: return "EmptySingularSet";
    case ErrorCode::EmptyCrossings: return "EmptyCrossings";
    case ErrorCode::NoFreeSegment: return "NoFreeSegment";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::ZeroEdge: return "ZeroEdge";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace rdwkit
