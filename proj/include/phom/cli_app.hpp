#pragma once

namespace phom {

/// Entry point of the `phom` command-line tool. Returns the process exit
/// code: 0 on success, 2 on validation errors, 3 on numerical failure.
int run_cli(int argc, char** argv);

}  // namespace phom
