#ifndef CITEDIST_CLI_HPP
#define CITEDIST_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace citedist {

/// Process exit codes. Each failure prints one line
/// `error: <category>: <message>` to the error stream.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,     // category "usage"
  kExitIo = 3,        // category "io"
  kExitParse = 4,     // category "parse"
  kExitConfig = 5,    // category "config"
  kExitVersion = 6,   // category "version"
  kExitInternal = 10, // category "internal"
};

/// Runs the `citedist` command line. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace citedist

#endif
