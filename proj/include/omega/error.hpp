#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omega {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: automaton files, lassos, formulas.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

/// Well-formed but semantically invalid arguments (dimension mismatch,
/// unknown letter, alphabet mismatch, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A construction exceeded its configured state budget.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& construction, std::size_t cap)
      : Error(construction + ": state budget of " + std::to_string(cap) + " exceeded"), cap_(cap) {}

  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

inline constexpr std::size_t kDefaultCap = 1'000'000;
/// Storage bound for the matrices of one transition semigroup.
inline constexpr std::size_t kSemigroupByteBudget = std::size_t{512} << 20;

}  // namespace omega
