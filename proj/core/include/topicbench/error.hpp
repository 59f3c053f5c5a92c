#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace topicbench {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a spec, config, or argument violates its documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent file content. `line()` is 1-based, 0 when the
// problem is not tied to a particular line.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace topicbench
