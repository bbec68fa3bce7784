#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cpm::cli {

enum Status : int { ok = 0, domain_error = 1, usage_error = 2, inconclusive = 3 };

/// Runs one command; `args` excludes the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpm::cli
