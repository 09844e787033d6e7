#pragma once

#include <stdexcept>
#include <string>

namespace soilcast {

// Root of every exception thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition (bad parameter, mismatched
// shapes, out-of-range index).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed external input: CSV records, model files. The message carries a
// location (line number or byte offset) whenever one is known.
class ParseError : public Error {
 public:
  using Error::Error;
};

// An operation was invoked on an object that cannot honour it, e.g. asking an
// empty ensemble for a prediction.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// A model file declares a format version this build does not understand.
class UnsupportedVersionError : public Error {
 public:
  using Error::Error;
};

// Filesystem trouble: unreadable input, unwritable output.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace soilcast
