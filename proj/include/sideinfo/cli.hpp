#pragma once

// The `sideinfo` command-line tool as a callable function.

#include <iosfwd>
#include <string>
#include <vector>

namespace sideinfo::cli {

// Runs one invocation. `args` excludes the program name. Data written to
// standard output goes to `out`; diagnostics go to `err` as `code: message`.
// Returns the process exit status: 0 on success, 1 on a failed run or failed
// checks, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace sideinfo::cli
