#ifndef RELCOMP_ERROR_HPP
#define RELCOMP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relcomp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text; carries a 1-based line/column.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Unknown relation symbols, arity mismatches, conflicting declarations.
class SchemeError : public Error {
 public:
  using Error::Error;
};

// A valuation space larger than the configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Normalization produced something outside the normalized fragment.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

}  // namespace relcomp

#endif  // RELCOMP_ERROR_HPP
