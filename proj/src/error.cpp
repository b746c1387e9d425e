#include "xtwave/error.hpp"

namespace xtwave {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidRegularity: return "invalid-regularity";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::InvalidTestSpace: return "invalid-test-space";
    case ErrorCode::UnsupportedRule: return "unsupported-rule";
    case ErrorCode::IntegrationError: return "integration-error";
    case ErrorCode::DomainMismatch: return "domain-mismatch";
    case ErrorCode::AssemblyError: return "assembly-error";
    case ErrorCode::InvalidSpace: return "invalid-space";
    case ErrorCode::SingularSystem: return "singular-system";
    case ErrorCode::FactorizationError: return "factorization-error";
    case ErrorCode::MissingExact: return "missing-exact";
    case ErrorCode::IndefiniteGram: return "indefinite-gram";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::ConfigError: return "config-error";
  }
  return "unknown";
}

}  // namespace xtwave
