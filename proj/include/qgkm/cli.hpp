#pragma once

#include <iosfwd>

namespace qgkm {

/// Full command-line frontend. Streams receive everything the tool prints:
/// results on `out`, diagnostics on `err`. Returns the process exit code:
/// 0 for success, 1 for a refutation or failed verification, 2 for usage
/// errors (bad flags, malformed input files).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qgkm
