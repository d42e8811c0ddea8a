#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace voidext {

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 domain errors, 2 usage or parse failure, 3 transport failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color = false);

} // namespace voidext
