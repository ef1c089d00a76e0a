#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dnc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid channel specification. `location` is a byte offset
/// ("byte 17"), a JSON pointer ("/symbols/1/weight"), or a pointer plus an
/// offset into an embedded expression ("/constraint/expr@4").
class SpecError : public Error {
 public:
  SpecError(std::string location, const std::string& message)
      : Error(location + ": " + message), location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

/// Basis mismatch, invalid generating function, non-integral counts.
class AlgebraError : public Error {
 public:
  using Error::Error;
};

/// Channel cannot be turned into a generating function by the chosen route.
class BuildError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A configured size limit (terms, automaton states, frontier) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace dnc
