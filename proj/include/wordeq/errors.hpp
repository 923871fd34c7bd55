#pragma once

#include <stdexcept>
#include <string>

namespace wordeq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed problem, weight, or graph text.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An assignment does not cover every variable of the formula it is checked against.
class MissingVariableError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or expansion would exceed its configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Matrix/vector shapes in model weights or activations disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace wordeq
