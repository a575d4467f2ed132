#pragma once

#include <stdexcept>
#include <string>

namespace lexvote {

// Error categories. The CLI maps IoError to exit code 1 and the others to 2.

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, std::size_t line, const std::string& what)
      : std::runtime_error(where + ":" + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mathematically undefined input, e.g. an all-zero contingency table.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace lexvote
