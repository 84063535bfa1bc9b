#pragma once

#include <iosfwd>

namespace rdwkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitComputation = 2;

/// Entry point of the rdwkit command. Results go to `out` unless --out names
/// a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rdwkit::cli
