#pragma once

#include <stdexcept>
#include <string>

namespace adrcnn {

// Input file could not be opened or is structurally unusable.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed content inside an otherwise readable stream.  Carries the
// 1-based line (or entry) number where parsing failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  explicit ParseError(const std::string& what) : std::runtime_error(what), line_(-1) {}

  long line() const { return line_; }

 private:
  long line_;
};

// Violated operation precondition or inconsistent model state.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// Non-finite values encountered during optimization; training aborts.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace adrcnn
