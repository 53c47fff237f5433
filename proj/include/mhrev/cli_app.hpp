#ifndef MHREV_CLI_APP_HPP
#define MHREV_CLI_APP_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mhrev {

/// Command dispatch for the `mhrev` tool. Data goes to `out`, diagnostics
/// to `err`. Exit codes: 0 success, 1 theorem-backed verdict violated,
/// 2 parse/validation failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mhrev

#endif
