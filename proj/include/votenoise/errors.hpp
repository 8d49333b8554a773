#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace votenoise {

// Raised for swap distances between ballots that do not rank the same full
// candidate set.
class DistanceUndefined : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exhaustive enumeration would exceed the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UndefinedCorrelation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input file could not be parsed. line() is 1-based, 0 when not attributable
// to a single line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace votenoise
