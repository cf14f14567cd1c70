#pragma once

#include <stdexcept>
#include <string>

namespace tsvf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions disagree, or a subsystem layout does not multiply out.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value violates a type invariant (non-Hermitian matrix, bad trace, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class PostSelectionImpossible : public Error {
 public:
  using Error::Error;
};

class NotInStrongRegime : public Error {
 public:
  using Error::Error;
};

class NearOrthogonalPrePost : public Error {
 public:
  using Error::Error;
};

class NoAcceptedTrials : public Error {
 public:
  using Error::Error;
};

/// Brute-force oracle asked for a Hilbert space above 2^14.
class TooLargeForOracle : public Error {
 public:
  using Error::Error;
};

class NoConsistentHistory : public Error {
 public:
  using Error::Error;
};

class OrthogonalCollapseForbidden : public Error {
 public:
  using Error::Error;
};

/// Bad experiment configuration. Maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Output could not be written. Maps to CLI exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tsvf
