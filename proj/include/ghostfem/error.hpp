#pragma once

#include <stdexcept>
#include <string>

namespace ghostfem {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration: bad key, violated invariant, parse failure.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Array/vector sizes that do not match the mesh they are used with.
class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

/// LU factorization hit a zero pivot (structurally or numerically singular matrix).
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// The manufactured-solution potential was evaluated where its denominator vanishes.
class SingularPotential : public Error {
 public:
  SingularPotential(double phi, double chi);

  double phi() const noexcept { return phi_; }
  double chi() const noexcept { return chi_; }

 private:
  double phi_;
  double chi_;
};

}  // namespace ghostfem
