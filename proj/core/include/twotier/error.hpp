#pragma once

#include <stdexcept>
#include <string>

namespace twotier {

// Base of every error raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI error records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Invalid domain value. `field()` is a path such as "support_rates[1]".
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error("ValidationError", field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message)
      : Error("ParseError", message) {}
};

class OutsideStudiedRegion : public Error {
 public:
  explicit OutsideStudiedRegion(const std::string& message)
      : Error("OutsideStudiedRegion", message) {}
};

class InvalidOptions : public Error {
 public:
  explicit InvalidOptions(const std::string& message)
      : Error("InvalidOptions", message) {}
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& message)
      : Error("NonConvergence", message) {}
};

class EmptySample : public Error {
 public:
  explicit EmptySample(const std::string& message)
      : Error("EmptySample", message) {}
};

class NegativeWelfare : public Error {
 public:
  explicit NegativeWelfare(const std::string& message)
      : Error("NegativeWelfare", message) {}
};

class MissingKey : public Error {
 public:
  explicit MissingKey(const std::string& message)
      : Error("MissingKey", message) {}
};

}  // namespace twotier
