// SPDX-License-Identifier: Apache-2.0
//
// Randomized consistency sweep over the boundary-symbol algebra.
#pragma once

#include <vector>

#include "hstokes/parallel.hpp"
#include "hstokes/report.hpp"
#include "hstokes/symbol_core.hpp"

namespace hstokes {

struct SymbolSweepTolerances {
  double omega_identity = 1e-14;  // |omega^2 - |zeta|^2 - rho lambda_eps| / |omega|^2
  double inverse_identity = 1e-12;  // ||B inv - I|| / (||B|| ||inv||)
  double generic_inverse = 1e-10;   // ||inv - reference|| / ||reference|| against reference_symbol_inverse
  double factorization = 1e-13;     // ||diag(prefactor) reduced - B|| / ||B||
  double multiplier = 1e-12;        // |multiplier * stage trace - 1| (closed-form kernel chain)

  /// Throws DomainError unless every tolerance is positive and finite.
  void validate() const;
};

/// One report per invariant, rows in input order. Conditions (alpha, beta) with beta in {0, +1}.
std::vector<VerificationReport> verify_symbols(const std::vector<ModeParams>& modes, const SymbolSweepTolerances& tol,
                                               Execution exec = Execution::parallel);

}  // namespace hstokes
