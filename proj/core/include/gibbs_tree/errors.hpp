#pragma once

#include <stdexcept>
#include <string>

namespace gibbs_tree {

/// Raised when caller-supplied parameters or data violate a precondition.
/// The command line tool maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a brute-force enumeration would exceed the configuration cap.
class EnumerationCapError : public InputError {
 public:
  using InputError::InputError;
};

/// Raised when reading or writing a file fails (exit code 3 in the CLI).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gibbs_tree
