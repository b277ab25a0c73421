#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace eeq::cli {

enum ExitCode : int {
  kOk = 0,
  kDataError = 1,  // bad flags, unreadable or invalid input, bind failure
  kNotFound = 2,
};

/// Runs one `eeq` invocation. `args` excludes the program name. Results go
/// to `out`, diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace eeq::cli
