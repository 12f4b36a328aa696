#pragma once

#include <iosfwd>

namespace cqlad::cli {

/// Parses argv and runs one subcommand.  Data (CSV or JSON) goes to `out`
/// or the --out file; diagnostics and warnings go to `err` only.  Returns
/// the process exit code: 0 success, 1 domain error, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace cqlad::cli
