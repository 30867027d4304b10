#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace channellab::cli {

enum ExitCode { ok = 0, usage = 1, validation = 2, numerical = 3 };

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of `text`.
std::string sha256_hex(const std::string& text);

}  // namespace channellab::cli
