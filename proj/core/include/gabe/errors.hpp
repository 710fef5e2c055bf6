#pragma once

#include <stdexcept>
#include <string>

namespace gabe {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user-supplied configuration: config files, agent specs, parameters.
// The CLI maps this family to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A caller or an agent broke an interface contract (illegal action,
// malformed distribution, out-of-range payoff).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// An operation precondition does not hold (e.g. executing an inactive task).
class PreconditionError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

// A configured size bound was exceeded.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// An iterative solver hit its iteration cap without converging.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace gabe
