#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace forge {

/**
 * Dispatches one command-line invocation; args excludes the program name.
 * Results are canonical JSON (or DOT / suite text) on `os`, routed to a file
 * when --out is given. Exit codes: 0 success, 1 failed property suite,
 * 2 domain error, 3 exhausted budget, 64 usage errors, 65 malformed JSON.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& os);

}  // namespace forge
