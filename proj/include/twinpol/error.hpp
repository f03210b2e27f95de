#pragma once

#include <stdexcept>
#include <string>

namespace twinpol {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidModelError : public Error {
public:
  using Error::Error;
};

/// Radial grid or basis truncation not converged.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

/// Propagation lost unitarity (norm drift beyond tolerance).
class IntegrationError : public Error {
public:
  using Error::Error;
};

/// Eigensolver failure or an inconsistent numerical result.
class NumericalError : public Error {
public:
  using Error::Error;
};

class GridMismatchError : public Error {
public:
  using Error::Error;
};

/// A measurement could not be made unambiguously (e.g. not exactly two peaks).
class AmbiguityError : public Error {
public:
  using Error::Error;
};

class SizeError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace twinpol
