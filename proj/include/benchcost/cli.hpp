#pragma once

namespace benchcost {

// Runs the command-line tool. Exit codes: 0 success, 2 config/usage error,
// 3 infeasible target or unmet hypotheses, 4 verification failure.
int cli_main(int argc, const char* const* argv);

}  // namespace benchcost
