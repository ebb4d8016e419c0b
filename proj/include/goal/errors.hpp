#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace goal {

// Malformed text; offset/line/column locate the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::size_t line, std::size_t column)
      : std::runtime_error(message + " at " + std::to_string(line) + ":" + std::to_string(column)),
        offset_(offset), line_(line), column_(column), bare_(message) {}

  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& bare_message() const { return bare_; }

 private:
  std::size_t offset_, line_, column_;
  std::string bare_;
};

// Well-formed input that violates a semantic constraint (unknown atom, invalid mental state).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// State-space budget or oracle bounds exhausted.
class BoundsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request the engine cannot answer in the supported fragment.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace goal
