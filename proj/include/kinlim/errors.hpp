#pragma once

#include <stdexcept>
#include <string>

namespace kinlim {

// Rejected user input: invalid controls, malformed config, violated preconditions.
// The CLI maps it to exit status 1; any other exception maps to 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace kinlim
