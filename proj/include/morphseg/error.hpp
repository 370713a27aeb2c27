#pragma once

#include <stdexcept>
#include <string>

namespace morphseg {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text: bad category codes, broken morpheme markers,
// wrong column counts, invalid UTF-8. Messages carry the offending
// value and, where known, the byte offset or line number.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Violated data preconditions and runtime data problems: misaligned
// gold/prediction files, missing categories, underivable words.
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration: bad hyperparameters, incompatible model kinds,
// fractions that do not sum to one.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace morphseg
