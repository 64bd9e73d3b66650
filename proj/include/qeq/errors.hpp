#pragma once

#include <stdexcept>
#include <string>

namespace qeq {

// Exit-code mapping used by the CLI: invalid input -> 1, precision budget
// exceeded -> 2, scale guard exceeded -> 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSpecError : Error {
  using Error::Error;
};

struct PrecisionError : Error {
  using Error::Error;
};

struct ScaleGuardError : Error {
  using Error::Error;
};

}  // namespace qeq
