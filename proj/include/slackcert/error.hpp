#pragma once

#include <stdexcept>
#include <string>

namespace slackcert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user input (files, overrides, CLI values).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A combinatorial search gave up: no facet flag, no facet basis, stalled
// orientation. The input may be fine but needs manual overrides.
class SearchFailed : public Error {
 public:
  using Error::Error;
};

// An invariant of the exact pipeline was violated. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

class TimeLimitExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace slackcert
