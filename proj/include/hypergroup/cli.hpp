#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypergroup::cli {

/// Exit codes: 0 success, 1 domain error, 2 usage error.
/// Output path "-" writes to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace hypergroup::cli
