#pragma once

#include <iosfwd>

namespace ellbill::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one command line. Returns 0 on success, 2 on usage errors and 1 on
/// numerical failures.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ellbill::cli
