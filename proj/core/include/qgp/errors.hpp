#pragma once

#include <stdexcept>
#include <string>

namespace qgp {

// Broad failure classes. The CLI maps them to process exit codes:
// usage -> 1, data -> 2, numerical -> 3.
enum class ErrorKind { usage = 1, data = 2, numerical = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error(ErrorKind::usage, w) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& w) : Error(ErrorKind::usage, w) {}
};

struct SizeMismatch : Error {
  explicit SizeMismatch(const std::string& w) : Error(ErrorKind::usage, w) {}
};

struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& w) : Error(ErrorKind::usage, w) {}
};

struct TooManyQubits : Error {
  explicit TooManyQubits(const std::string& w) : Error(ErrorKind::usage, w) {}
};

struct OutOfDomain : Error {
  explicit OutOfDomain(const std::string& w) : Error(ErrorKind::usage, w) {}
};

struct EmptyInput : Error {
  explicit EmptyInput(const std::string& w) : Error(ErrorKind::data, w) {}
};

struct InsufficientData : Error {
  explicit InsufficientData(const std::string& w) : Error(ErrorKind::data, w) {}
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::data, w) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorKind::data, w) {}
};

struct FactorizationFailure : Error {
  explicit FactorizationFailure(const std::string& w)
      : Error(ErrorKind::numerical, w) {}
};

struct ObjectiveFailure : Error {
  explicit ObjectiveFailure(const std::string& w)
      : Error(ErrorKind::numerical, w) {}
};

}  // namespace qgp
