#pragma once

#include <stdexcept>
#include <string>

namespace hypqg {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model spec, invalid parameters, bad config values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A letter outside the model's alphabet.
class AlphabetError : public Error {
 public:
  using Error::Error;
};

// Exact distance requested outside the certified regime.
class NotCertified : public Error {
 public:
  explicit NotCertified(const std::string& what)
      : Error("distance not certified: " + what) {}
};

// Ball or search budget exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// An operation's documented precondition does not hold for the input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Bad quantitative constants (e.g. kappa <= 0, lambda < 1).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A construction produced something its own contract forbids.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// A certificate or witness failed re-verification.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypqg
