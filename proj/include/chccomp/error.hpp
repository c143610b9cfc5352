#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chccomp {

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax-level failure with the position where it was detected.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, SourceLocation loc)
      : Error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + what),
        loc_(loc) {}

  SourceLocation location() const noexcept { return loc_; }

 private:
  SourceLocation loc_;
};

class LexError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class ParseError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class ParametricDatatypeError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

}  // namespace chccomp
