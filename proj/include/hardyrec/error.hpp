#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input detected before any computation (maps to CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : ValidationError(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class PreconditionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Raised when an interval straddles a singularity; a tighter enclosure may fix it.
class NeedsPrecision : public Error {
 public:
  using Error::Error;
};

class PrecisionCapExceeded : public Error {
 public:
  using Error::Error;
};

class FloorAmbiguity : public Error {
 public:
  FloorAmbiguity(const std::string& n, int bits)
      : Error("floor of a(" + n + ") still ambiguous at " + std::to_string(bits) + " bits"),
        n_(n) {}
  const std::string& argument() const { return n_; }

 private:
  std::string n_;
};

class Inconclusive : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

}  // namespace hr
