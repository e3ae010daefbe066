#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace groupoidkit {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A value violates a structural invariant (dangling endpoint, bad path, ...).
class GraphError : public Error {
 public:
  using Error::Error;
};

// Operands of a binary operation live over different graphs.
class MixedGraphError : public Error {
 public:
  MixedGraphError() : Error("operands belong to different graphs") {}
};

class MoveError : public Error {
 public:
  using Error::Error;
};

}  // namespace groupoidkit
