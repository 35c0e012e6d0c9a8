#ifndef MHLAB_CLI_HPP
#define MHLAB_CLI_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mhlab::cli {

/// The mhlab command line. Exit codes: 0 on success, 2 for invalid input
/// (unknown ids, malformed files, empty stores), 1 for other failures.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// list, run, tune, stats, bias-audit, report.
std::vector<std::string> subcommands();
/// Long flag names ("--algos") a subcommand accepts.
std::vector<std::string> flags(std::string_view subcommand);
/// The text `mhlab <subcommand> --help` prints.
std::string help(std::string_view subcommand);

}  // namespace mhlab::cli

#endif
