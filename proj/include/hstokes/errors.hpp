// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hstokes {

/// Invalid input: non-finite values, Re(lambda) < 0, dimension mismatch, bad grids.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The tangential mean mode xi = 0 has no decaying halfspace solution for this operation.
class ZeroModeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Requested (alpha, beta) combination is served by a different code path.
class UnsupportedCaseError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Boundary symbol is singular at this mode.
class SingularModeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class QuadratureBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear system of a discrete oracle is too ill-conditioned to trust.
class IllConditionedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial data violate a compatibility condition required by the stepper.
class IncompatibleDataError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace hstokes
