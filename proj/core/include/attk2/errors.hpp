#pragma once

#include <stdexcept>
#include <string>

namespace attk2 {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A position, ordinal or identifier lies outside the valid range.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// A looked-up entity (label, ordinal, edge id, ...) does not exist.
class NotFound : public Error {
 public:
  using Error::Error;
};

/// Malformed caller input (bad cell, malformed rectangle, duplicate id).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Input violates the graph schema; the message names the offending item.
class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class AlreadyExists : public Error {
 public:
  using Error::Error;
};

/// Serialized store is damaged: bad magic, version, or truncated section.
class CorruptFile : public Error {
 public:
  using Error::Error;
};

}  // namespace attk2
