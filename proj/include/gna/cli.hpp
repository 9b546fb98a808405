#pragma once

namespace gna {

// entry point shared by the binary and the CLI tests;
// exit codes: 0 success, 1 configuration/parse errors, 2 broken internal invariant
int run_cli(int argc, const char* const* argv);

} // namespace gna
