#pragma once

#include <stdexcept>
#include <string>

namespace awpkit {

// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (tree files, weight files, tables).
class InputError : public Error {
 public:
  using Error::Error;
};

// Caller passed an argument outside the operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An internal invariant was breached at run time.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace awpkit
