#pragma once

#include <stdexcept>

namespace twomode {

// Precondition / misuse failures: bad arguments, mismatched spaces,
// out-of-range parameters. The CLI maps these to exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical-contract failures: trace/Hermiticity/PSD violations,
// excessive truncation weight, SSR violations. CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twomode
