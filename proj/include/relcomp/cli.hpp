#ifndef RELCOMP_CLI_HPP
#define RELCOMP_CLI_HPP

#include <ostream>
#include <string>

#include "relcomp/relalg.hpp"
#include "relcomp/semantics.hpp"

namespace relcomp {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNotAllowed = 2,
  kExitMismatch = 3,
  kExitResource = 4,
};

// Header of column names in ord order, then one row per tuple with rows
// sorted by atom names. The empty scheme and the empty tuple print as `()`.
std::string render_relation(const Relation& t, const Structure& m, const VarUniverse& u);

// Subcommands check, compile, eval, verify, fuzz. Returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace relcomp

#endif  // RELCOMP_CLI_HPP
