#pragma once

#include <stdexcept>
#include <string>

namespace armed {

// Base error. `kind()` is a stable token used by the CLI's machine-parsable
// error line ("error: <kind>: <message>").
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error("invalid_argument", message) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message)
      : Error("parse_error", message) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error("validation_error", message) {}
};

class ConnectivityError : public Error {
 public:
  ConnectivityError(std::string endpoint, const std::string& message)
      : Error("connectivity_error", endpoint + ": " + message),
        endpoint_(std::move(endpoint)) {}

  const std::string& endpoint() const noexcept { return endpoint_; }

 private:
  std::string endpoint_;
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& message)
      : Error("protocol_error", message) {}
};

}  // namespace armed
