#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace corners {

// Full command-line surface.  Data dumps and result records go to out, human
// notes to err; the return value is the process exit code: 0 success or a
// domain negative, 2 a recorded check failed, 3 a budget ran out, 4 usage.
int cli_run(std::vector<std::string> args, std::istream& in, std::ostream& out,
            std::ostream& err);

} // namespace corners
