#pragma once

namespace bmcap {

// Subcommand driver; returns the process exit code (0 ok, 1 validation,
// 2 solver non-convergence, 3 enumeration/codebook cap exceeded).
int run_cli(int argc, const char* const* argv);

}  // namespace bmcap
