#pragma once

#include <ostream>

namespace faster::cli {

// Full command-line entry point. Streams NDJSON emissions / reports to
// `out`, diagnostics to `err`. Returns the process exit code:
// 0 success, 2 schema or usage errors, 3 runtime errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace faster::cli
