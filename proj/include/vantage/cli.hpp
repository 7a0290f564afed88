#pragma once

#include <iosfwd>

namespace vantage::cli {

enum ExitCode : int { kSuccess = 0, kInternalError = 1, kInputError = 2 };

/// Entry point behind the `vantage` executable; usable in-process by tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vantage::cli
