#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semiframe::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kValidationError = 2, kNumericalError = 3 };

// args excludes the program name. The report goes to --output when given,
// otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semiframe::cli
