#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace bcl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed concrete syntax. `position()` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A name that is not declared in the vocabulary.
class UnknownNameError : public Error {
 public:
  using Error::Error;
};

/// A configured size limit would be exceeded; the query is refused.
class CapError : public Error {
 public:
  using Error::Error;
};

/// A structural constraint on a model is violated (e.g. "C3", "Atm0-dependence").
class ConstraintError : public Error {
 public:
  ConstraintError(std::string constraint, const std::string& detail)
      : Error(constraint + ": " + detail), constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

}  // namespace bcl
