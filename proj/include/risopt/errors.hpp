#pragma once

#include <stdexcept>
#include <string>

namespace risopt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of operands do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Singular matrix, pole hit, or loss of numerical validity.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Root bracket without a sign change; caller must expand it.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// An all-zero channel that admits no beamformer.
class DegenerateChannelError : public Error {
 public:
  using Error::Error;
};

/// A per-user SINR constraint set that cannot be met.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; message carries the location.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace risopt
