#pragma once

#include <stdexcept>
#include <string>

namespace brainaug {

// Bad input: malformed files, violated preconditions, bad configuration.
// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Something went wrong while computing (non-finite loss, exhausted retries).
// The CLI maps this to exit code 2.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace brainaug
