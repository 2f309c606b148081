#ifndef ANCHORALIGN_TOOLS_CLI_HPP
#define ANCHORALIGN_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace anchoralign::cli {

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Returns the process exit code: 0 success, 1 runtime error,
// 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace anchoralign::cli

#endif
