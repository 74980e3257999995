#pragma once

#include <ostream>

namespace periodica {

// The `periodica` command line. Machine output is JSON (or pdg/SVG where the
// command produces a document); --pretty switches reports to tables.
// Returns 0 on success, 1 on a domain failure and 2 on a usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace periodica
