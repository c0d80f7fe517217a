#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace forge::cli {

/// Runs one `forge` invocation. Returns 0 when clean, 1 on findings and 2 on
/// usage or IO errors. Machine output goes to `out`, messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace forge::cli
