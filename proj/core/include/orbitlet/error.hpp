#pragma once

#include <stdexcept>
#include <string>

namespace orbitlet {

// Base of every error raised by the library. Each subclass maps to a CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

// Malformed or invariant-violating input (bad JSON, non-associative tensor, ...).
class ParseError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class UnsupportedInput : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class NonConvergence : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class SingularElement : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class NotInGroup : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class NotInOrbit : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class NotAShearingSubgroup : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

}  // namespace orbitlet
