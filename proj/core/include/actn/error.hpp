#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace actn {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Leg dimensions disagree, or a leg name is unknown or duplicated.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A builder or integrand spec violates its documented invariants.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Expression text does not match the grammar.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& expected)
      : Error("parse error at byte " + std::to_string(offset) + ": expected " + expected),
        offset_(offset),
        expected_(expected) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

}  // namespace actn
