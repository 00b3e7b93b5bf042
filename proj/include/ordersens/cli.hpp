#ifndef ORDERSENS_CLI_HPP
#define ORDERSENS_CLI_HPP

#include <ostream>

namespace ordersens::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kInputError = 2, kPreconditionFailure = 3 };

/// Runs one subcommand (`lattice`, `check`, `reconstruct`, `estimate`, `plan`,
/// `policy`, `simulate`). Reports go to `--out`; summaries to `out`;
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ordersens::cli

#endif
