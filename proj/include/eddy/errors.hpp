#pragma once

#include <stdexcept>
#include <string>

namespace eddy {

/// Bad input: violated precondition, malformed file, unknown name.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace eddy
