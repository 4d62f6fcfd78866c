#pragma once

#include <stdexcept>
#include <string>

namespace nskp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was not met by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Poisson source with nonzero mean on the torus.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

/// Density dropped below the vacuum floor.
class VacuumError : public Error {
 public:
  VacuumError(const std::string& what, double min_rho, std::size_t location)
      : Error(what), min_rho_(min_rho), location_(location) {}
  double min_rho() const noexcept { return min_rho_; }
  std::size_t location() const noexcept { return location_; }

 private:
  double min_rho_;
  std::size_t location_;
};

/// A time step produced a non-finite or non-admissible state, or violated the CFL bound.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, double time, double dt)
      : Error(what), time_(time), dt_(dt) {}
  double time() const noexcept { return time_; }
  double dt() const noexcept { return dt_; }

 private:
  double time_;
  double dt_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nskp
