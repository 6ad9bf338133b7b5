#pragma once

#include <stdexcept>
#include <string>

namespace mpsm {

// Malformed input files (CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failures and violated numeric preconditions (CLI exit code 3).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mpsm
