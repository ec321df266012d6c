#pragma once

#include <stdexcept>
#include <string>

namespace ergomix {

/// Invalid parameters passed to a module entry point.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point lies on the singular set of a map (baker's map discontinuity line).
class SingularInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Tangent cocycle blew up: the step size is too coarse for the field.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite Lyapunov accumulation (a zero R diagonal entry).
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Entropy estimation has too few samples for the observed codebook.
class UndersampledError : public std::runtime_error {
 public:
  UndersampledError(const std::string& what, long long required)
      : std::runtime_error(what), required_samples(required) {}
  long long required_samples;
};

/// Configuration text could not be turned into a valid Config.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A required input or output file could not be read or written.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ergomix
