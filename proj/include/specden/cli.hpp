#pragma once

namespace specden {

// Full command-line front end. Exit codes: 0 ok, 1 usage, 2 numerical
// failure, 3 hypothesis-validation failure.
int run_cli(int argc, const char* const* argv);

}  // namespace specden
