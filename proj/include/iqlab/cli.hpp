#pragma once

#include <string>
#include <vector>

namespace iqlab {

/**
 * Parses and runs one command line (without the program name).  Reports go
 * to --out or stdout; wall time goes to stderr.  Returns the process exit
 * code: 0 on success, 2 when a consistency check fails, 3 on bad parameters.
 */
int run_cli(const std::vector<std::string>& args);

}  // namespace iqlab
