#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdwkit {

enum class ErrorCode {
  InvalidGeometry,
  InvalidArgument,
  EmptySingularSet,
  EmptyCrossings,
  NoFreeSegment,
  Unreachable,
  ZeroEdge,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying one of the library's error kinds.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rdwkit
