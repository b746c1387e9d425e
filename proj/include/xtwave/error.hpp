#pragma once

#include <stdexcept>
#include <string>

namespace xtwave {

enum class ErrorCode {
  InvalidArgument,
  InvalidRegularity,
  OutOfDomain,
  InvalidTestSpace,
  UnsupportedRule,
  IntegrationError,
  DomainMismatch,
  AssemblyError,
  InvalidSpace,
  SingularSystem,
  FactorizationError,
  MissingExact,
  IndefiniteGram,
  ParseError,
  ConfigError,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this type; the code lets callers
// (and the CLI exit-code mapping) branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace xtwave
