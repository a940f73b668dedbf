#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mpf::cli {

/// Runs one command line (without the program name). Returns 0 on
/// pass/valid/representable, 1 on fail/refuted/not representable and 2 on a
/// usage or format error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpf::cli
