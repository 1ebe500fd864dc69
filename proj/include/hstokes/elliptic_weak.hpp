// SPDX-License-Identifier: Apache-2.0
//
// Per-mode elliptic problems on the halfspace {y > 0}: harmonic extensions,
// Dirichlet/Neumann solves with the kernels
//   k_-+(y, eta) = (e^{-|xi||y-eta|} -+ e^{-|xi|(y+eta)}) / (2|xi|),
// the Weyl and Helmholtz projections, and the divergence-adjusting pressure.
#pragma once

#include <vector>

#include "hstokes/profile.hpp"
#include "hstokes/symbol_core.hpp"

namespace hstokes {

enum class EllipticBc { dirichlet_zero, neumann_zero };

/// h e^{-|xi| y}: harmonic, trace h.
ScalarModeProfile dirichlet_extend_mode(const std::vector<double>& xi, cplx h);
/// (h/|xi|) e^{-|xi| y}: harmonic, outward normal derivative -d/dy at 0 equals h.
ScalarModeProfile neumann_extend_mode(const std::vector<double>& xi, cplx h);

/// Strong form: |xi|^2 q - q'' = rhs with q(0) = 0 or q'(0) = 0, decaying.
ScalarModeProfile solve_elliptic_mode(const std::vector<double>& xi, const ScalarModeProfile& rhs, EllipticBc bc);

/// Weak form of -Delta q = div f. Dirichlet: q(0) = 0. Neumann: (grad q + f) . nu = 0 at y = 0.
/// Tabulated normal components are never differentiated. Closed-form f under the Dirichlet
/// condition is solved in strong form from the merged divergence, so solenoidal terms cancel
/// before the resolvent divides by |xi|^2 - r^2.
ScalarModeProfile solve_weak_elliptic_mode(const std::vector<double>& xi, const VectorModeProfile& f, EllipticBc bc);

/// f - grad q with q in the zero-trace class: mode-divergence free output.
VectorModeProfile weyl_project_mode(const std::vector<double>& xi, const VectorModeProfile& f);
/// f - grad q with the Neumann potential: divergence free with zero normal trace.
VectorModeProfile helmholtz_project_mode(const std::vector<double>& xi, const VectorModeProfile& f);

/// Source (rho lambda_eps + mu|xi|^2) g - mu g'' of the divergence pressure, in closed form.
ScalarModeProfile divergence_pressure_source(const ModeParams& mode, const ScalarModeProfile& g);

/// Pressure q with zero trace solving |xi|^2 q - q'' = (rho lambda_eps + mu|xi|^2) g - mu g'',
/// built as grad q = -(I - W)(rho lambda_eps - mu Delta) grad q_hat where Delta q_hat = g and
/// -d/dy q_hat(0) = eta. The result does not depend on eta.
ScalarModeProfile divergence_pressure_mode(const ModeParams& mode, const ScalarModeProfile& g, cplx eta = 0.0);

}  // namespace hstokes
