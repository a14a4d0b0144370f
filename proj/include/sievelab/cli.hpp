#pragma once

namespace sievelab::cli {

// Parses argv, executes exactly one subcommand, writes its output to --out
// or stdout. Returns 0 on success, 2 on flag/validation errors, 1 on
// runtime errors; a one-line diagnostic goes to stderr.
int run(int argc, const char* const* argv);

}  // namespace sievelab::cli
