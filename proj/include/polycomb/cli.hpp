#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polycomb/policy.hpp"

namespace polycomb::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitDenied = 4;
inline constexpr int kExitUnknownParameter = 5;

/// "subject object type[,type...]". Throws ParseError (column-annotated,
/// reported on `line_number`).
AccessRequest parse_request_line(const std::string& line, std::size_t line_number = 1);

/// Request file: one request per line; blank and '#' lines are skipped.
std::vector<AccessRequest> parse_request_file(std::istream& in);

/// "lo:hi:step" with lo > 0, step > 0, hi >= lo. Throws ParseError.
std::vector<double> parse_grid(const std::string& text);

/// Runs the command line (args excludes the program name). Output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace polycomb::cli
