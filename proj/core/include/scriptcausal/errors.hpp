#pragma once

#include <stdexcept>
#include <string>

namespace scriptcausal {

// Precondition or configuration violation by the caller.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input file or record.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite value produced or consumed by a numerical kernel.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void throw_invalid(const std::string& what);
[[noreturn]] void throw_format(const std::string& what);
[[noreturn]] void throw_numerical(const std::string& what);

}  // namespace scriptcausal
