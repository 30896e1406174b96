#pragma once

// Command-line front end, callable in-process for tests:
//   lzs <mode> --config <path> [--output <path>] [--threads <n>] [--seedless]
// Returns 0 on success, 1 on usage or config errors, 2 on runtime failures.
int cli_main(int argc, const char* const* argv);
