#pragma once

#include <string>
#include <vector>

namespace lawless {

// Parses argv-style arguments (program name excluded) and runs one
// subcommand: born | phenomenon | modular | holonomy. Writes the report to
// --out (or stdout) in --format json|csv.
//
// Exit codes: 0 success; 2 validation problem (bad flags, missing files,
// schema or argument errors); 3 numerical-tolerance failure; 1 unexpected
// crash. A run is fully determined by its flags: identical invocations
// produce byte-identical reports.
int run_cli(const std::vector<std::string>& args);

}  // namespace lawless
