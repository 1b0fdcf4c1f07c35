#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uniteig {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-contract input data (non-finite entries, bad files, bad spectra specs).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A real matrix that should carry the [[A,-B],[B,A]] block structure does not.
class StructureError : public InputError {
 public:
  StructureError(const std::string& what, double discrepancy)
      : InputError(what), discrepancy_(discrepancy) {}

  double discrepancy() const noexcept { return discrepancy_; }

 private:
  double discrepancy_;
};

/// Text file does not follow the expected format.
class FormatError : public InputError {
 public:
  using InputError::InputError;
};

/// An iterative kernel ran out of sweeps.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t sweeps)
      : Error(what + " (after " + std::to_string(sweeps) + " sweeps)"), sweeps_(sweeps) {}

  std::size_t sweeps() const noexcept { return sweeps_; }

 private:
  std::size_t sweeps_;
};

/// Eigenvalues handed to the recovery do not lie near the unit circle.
class SpectrumError : public Error {
 public:
  using Error::Error;
};

}  // namespace uniteig
