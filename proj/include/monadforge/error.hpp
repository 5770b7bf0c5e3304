#pragma once

#include <stdexcept>
#include <string>

namespace monadforge {

enum class ErrorKind {
  MalformedInput,
  Shape,
  Argument,
  InvalidGroupElement,
  Precondition,
  Unsampleable,
  UnsupportedRegime,
  SamplingFailed,
  PerturbFailed,
  Schema,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace monadforge
