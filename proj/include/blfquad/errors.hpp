#pragma once

#include <stdexcept>
#include <string>

namespace blfquad {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Roll or pitch left the open interval (-pi/2, pi/2); the rigid-body model
/// is no longer valid.
class ModelDomainError : public Error {
 public:
  using Error::Error;
};

/// Euler-rate transform evaluated too close to the pitch singularity.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A tracking error reached or crossed its prescribed barrier bound.
class BoundViolationError : public Error {
 public:
  using Error::Error;
};

/// Demanded thrust/moment quadruple maps to a negative squared rotor speed.
class InfeasibleAllocationError : public Error {
 public:
  using Error::Error;
};

/// Net thrust too small to define the desired roll/pitch extraction.
class DegenerateThrustError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value or scenario setup.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace blfquad
