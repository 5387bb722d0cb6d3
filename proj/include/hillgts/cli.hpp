#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hillgts {

// Runs one command-line invocation (argv without the program name) and
// returns the process exit status: 0 on success, 1 when a check, search,
// proof attempt, or correspondence run fails, 2 on usage or input errors.
int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace hillgts
