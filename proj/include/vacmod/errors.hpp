#pragma once

#include <stdexcept>
#include <string>

namespace vacmod {

// Common base so callers can catch everything the engine raises.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// build_sl(N) with N < 2.
struct NotSimpleError : Error {
  using Error::Error;
};

// Mixing vectors/generators that belong to different algebras or modules.
struct AlgebraMismatchError : Error {
  using Error::Error;
};

// Division by the zero rational function.
struct ZeroDivisionError : Error {
  using Error::Error;
};

// A substitution made a denominator vanish. Carries the factor that
// vanished, in canonical text form, when it can be isolated.
struct PoleError : Error {
  std::string offending_factor;
  PoleError(const std::string& msg, std::string factor)
      : Error(msg), offending_factor(std::move(factor)) {}
};

// A result (or an explicitly requested degree) would leave the graded
// truncation window of the module.
struct TruncationError : Error {
  using Error::Error;
};

// Malformed domain input (bad monomial for an embedding, bad parse text, ...).
struct DomainError : Error {
  using Error::Error;
};

// A Sugawara-type operator was requested at numeric level k = -h{vee}.
struct CriticalLevelError : Error {
  using Error::Error;
};

// Cache entry exists but was produced under a different module fingerprint.
struct CacheInvalidError : Error {
  using Error::Error;
};

// Bad harness / CLI configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace vacmod
