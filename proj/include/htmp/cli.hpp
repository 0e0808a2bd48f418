#ifndef HTMP_CLI_HPP
#define HTMP_CLI_HPP

#include <string>
#include <vector>

namespace htmp::cli {

// Runs one command line (without argv[0]). Returns the process exit code:
// 0 success, 2 usage or argument errors, 3 numeric or estimation failures.
int dispatch(const std::vector<std::string>& args);

} // namespace htmp::cli

#endif
