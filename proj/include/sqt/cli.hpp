#pragma once

#include <iosfwd>

namespace sqt {

// Process exit codes of sqtool.
enum ExitCode : int {
    exit_ok                 = 0,
    exit_property_violation = 1,
    exit_config_error       = 2,
    exit_domain_error       = 3,
};

// Entry point of sqtool: subcommands schmidt, sq, verify, scatter and gas, each taking
// --config PATH, --seed N, --out PATH and --format {csv,json}. Reports go to `out` (or the --out
// file); diagnostics are a single line on `err`.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace sqt
