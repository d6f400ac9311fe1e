#pragma once

#include <iosfwd>
#include <string>

namespace bootperc::cli {

/// Exit codes: 0 success, 1 unexpected failure, 2 invalid flags or
/// parameters, 3 degenerate regime, 4 output not writable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Parses "0.001" or the regime form "n^-0.7" (evaluated against n).
double parse_probability(const std::string& text, double n);

}  // namespace bootperc::cli
