#pragma once

#include <stdexcept>
#include <string>

namespace diqss {

// Caller passed something outside an operation's domain.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs are valid but the requested quantity does not exist
// (e.g. no positive key rate anywhere in the bracket).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace diqss
