// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace hstokes {

struct QuadratureCfg {
  double rel_tol = 1e-10;
  double truncation_multiplier = 40.0;  // Y = multiplier / (slowest decay rate)
  int max_subdivisions = 2000;

  void validate() const;
};

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  double l1_norm = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on [breaks.front(), breaks.back()].
/// Interior breakpoints seed the initial partition (use them at kinks).
/// Stops when the summed error estimate is below rel_tol * max(|I|, 1e-3 * L1),
/// or when max_subdivisions bisections have been spent (converged = false).
QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                    const std::vector<double>& breaks, const QuadratureCfg& cfg);

/// Gauss-Legendre rule with `points` nodes mapped to [0, 1].
struct UnitRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const UnitRule& gauss_legendre_unit(int points);

}  // namespace hstokes
