#pragma once

#include <stdexcept>
#include <string>

namespace isl {

// Base for every library error. `code` is a short machine-readable tag.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Bad input or violated precondition (CLI exit status 2).
class ValidationError : public Error {
 public:
  using Error::Error;
  explicit ValidationError(const std::string& what) : Error("validation", what) {}
};

// Numerical breakdown (CLI exit status 3).
class NumericalError : public Error {
 public:
  using Error::Error;
  explicit NumericalError(const std::string& what) : Error("numerical", what) {}
};

class DomainError : public ValidationError {
 public:
  explicit DomainError(const std::string& what) : ValidationError("domain", what) {}
};

class PoleError : public NumericalError {
 public:
  explicit PoleError(const std::string& what) : NumericalError("pole", what) {}
};

}  // namespace isl
