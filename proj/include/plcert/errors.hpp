#pragma once

#include <stdexcept>
#include <string>

namespace plcert {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operand dimensions do not match (vector/matrix/polyhedron shapes).
class DimensionError : public Error {
  public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// Malformed textual or JSON input ("1/0", missing fields, bad shapes).
class ParseError : public Error {
  public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

/// An operation was called on inputs that violate its stated preconditions
/// (unvalidated function, infeasible cell, wrong ambient dimension, ...).
class PreconditionError : public Error {
  public:
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// A result failed one of the library's own exactness cross-checks.
/// Seeing this means a bug, not bad input.
class InternalError : public Error {
  public:
    explicit InternalError(const std::string& what) : Error(what) {}
};

/// Deterministic rejection sampling ran out of tries.
class SamplingError : public Error {
  public:
    explicit SamplingError(const std::string& what) : Error(what) {}
};

}  // namespace plcert
