#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace attk2::cli {

/// Exit codes: 0 success, 1 input error, 2 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace attk2::cli
