#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sobolev {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: wrong dimensions, values outside a documented range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An exponent with p = infinity was handed to a theorem checker.
class InfiniteExponentError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Malformed text (expressions, rationals, configs). `position` is a 0-based
/// character offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Floating point evaluation left the domain of an expression
/// (log of a non-positive value, division by zero, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A function expected to vanish near a boundary does not.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// Partition-of-unity seeds whose plateaus do not cover the manifold.
class CoverError : public Error {
 public:
  CoverError(const std::string& msg, std::vector<double> witness)
      : Error(msg), witness_(std::move(witness)) {}
  const std::vector<double>& witness() const noexcept { return witness_; }

 private:
  std::vector<double> witness_;
};

class EmptyOverlapError : public Error {
 public:
  using Error::Error;
};

/// Tensor valence does not fit the requested operation.
class ValenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace sobolev
