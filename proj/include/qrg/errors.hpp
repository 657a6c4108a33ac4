#pragma once

#include <stdexcept>
#include <string>

namespace qrg {

// Malformed or invalid input (files, identifiers, games failing validation).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured budget (tree nodes, profiles, time) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was called outside its domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A profile assumed to be a secure equilibrium was shown not to be one.
class NotSecureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrg
