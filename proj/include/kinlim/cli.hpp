#pragma once

#include <ostream>

namespace kinlim {

// Exit status: 0 success, 1 invalid input or failed validation, 2 runtime error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kinlim
