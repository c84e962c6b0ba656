#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relscatter::app {

// Exit codes: 0 success, 1 a check failed or the numerics gave up,
// 2 usage or configuration error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relscatter::app
