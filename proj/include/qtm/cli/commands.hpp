#pragma once

#include <ostream>

namespace qtm::cli {

/// Entry point of the qtmlab tool: index, search, expand, eval, sweep, constraints.
/// Returns the process exit status. Failures print one `qtmlab: error: ...` line to `err`.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qtm::cli
