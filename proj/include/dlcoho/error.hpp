#pragma once

#include <stdexcept>
#include <string>

namespace dlcoho {

// Error taxonomy shared by every module. The CLI maps these onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad arguments or calls that violate a documented precondition.
struct UsageError : Error {
  using Error::Error;
};

// Unsupported group types, malformed data packs, missing files.
struct ConfigError : Error {
  using Error::Error;
};

// Input data that is inconsistent with itself or with a proven constraint.
struct ContradictionError : Error {
  using Error::Error;
};

// A resource guard (enumeration size, time budget) was exceeded.
struct ResourceError : Error {
  using Error::Error;
};

}  // namespace dlcoho
