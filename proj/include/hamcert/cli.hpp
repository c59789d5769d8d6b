#pragma once

namespace hamcert {

// Exit codes: 0 success, 1 config error, 2 empty certificate, 3 solver
// divergence.
int run_cli(int argc, const char* const* argv);

}  // namespace hamcert
