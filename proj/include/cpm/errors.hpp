#pragma once

#include <stdexcept>
#include <string>

namespace cpm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A code does not decode to the requested structure.
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the operation's domain.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A bounded search ran out of fuel before it could decide.
class Inconclusive : public Error {
 public:
  using Error::Error;
};

class UnknownObservable : public Error {
 public:
  using Error::Error;
};

class NotAState : public Error {
 public:
  using Error::Error;
};

/// Conditioning on a set with no states.
class EmptyCondition : public Error {
 public:
  using Error::Error;
};

class MismatchedObservables : public Error {
 public:
  using Error::Error;
};

/// Input exceeds the bound of an exhaustive search.
class SizeLimit : public Error {
 public:
  using Error::Error;
};

class MalformedState : public Error {
 public:
  using Error::Error;
};

/// Probabilities of a measurement never reached 1 within the value bound.
class NonterminatingSum : public Error {
 public:
  using Error::Error;
};

/// A truncated oracle was asked for an index past its defined prefix.
class TruncatedInput : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpm
