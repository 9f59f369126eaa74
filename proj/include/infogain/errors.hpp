#pragma once

#include <stdexcept>
#include <string>

namespace infogain {

// Base of every error raised by the library. `code()` is a stable
// machine-readable tag, `locus()` names where the problem was found
// (a field path, "row 12, column 'blur'", a variable name, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, std::string locus, const std::string& message)
      : std::runtime_error(locus.empty() ? message : locus + ": " + message),
        code_(std::move(code)),
        locus_(std::move(locus)) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& locus() const noexcept { return locus_; }

 private:
  std::string code_;
  std::string locus_;
};

// Malformed or inconsistent schema, or a reference to an unknown variable.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A dataset cell or row that cannot be mapped onto the schema.
class DataError : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

// Conditioning on an event of probability zero.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

// A computation was asked for outside its supported size.
class LimitError : public Error {
 public:
  using Error::Error;
};

// File system failures. The CLI maps these to exit status 2.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace infogain
