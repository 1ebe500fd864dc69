// SPDX-License-Identifier: Apache-2.0
//
// Per-mode parabolic problem omega^2 u - mu u'' = F on y > 0 with the divergence
// boundary condition: tangential part of the boundary operator plus div u = g at y = 0.
// Green kernels have the form K(y, eta) = G(y, eta) + theta G(y, -eta) with
//   G(y, eta) = exp(-s |y - eta|) / (2 sqrt(mu) omega),  s = omega / sqrt(mu).
#pragma once

#include <vector>

#include "hstokes/parallel.hpp"
#include "hstokes/profile.hpp"
#include "hstokes/quadrature.hpp"
#include "hstokes/report.hpp"
#include "hstokes/symbol_core.hpp"

namespace hstokes {

enum class KernelKind { G, G_plus, G_minus, Kv_plus, Kv_minus, Kw_plus, Kw_minus };

struct KernelSpec {
  KernelKind kind = KernelKind::G;
  ModeParams mode;

  /// Coefficient theta of the image term G(y, -eta).
  cplx reflection() const;
  std::string name() const;
};

/// Kernels for the tangential (v) and normal (w) velocity with tangential condition alpha.
KernelSpec velocity_kernel(const ModeParams& mode, int alpha, bool normal);

cplx eval_kernel(const KernelSpec& spec, double y, double eta);
/// d/dy of the kernel; at y = eta the one-sided limit from y > eta is returned.
cplx eval_kernel_dy(const KernelSpec& spec, double y, double eta);

struct KernelApplication {
  std::vector<double> y;
  std::vector<cplx> values;        // adaptive quadrature
  std::vector<cplx> closed_form;   // empty when rhs carries a table
  double max_error_estimate = 0.0;
  double max_rel_gap = 0.0;        // normwise gap quadrature vs closed form
  int subdivisions = 0;
};

/// y -> int_0^inf d^k/dy^k K(y, eta) rhs(eta) d eta by adaptive quadrature on [0, Y] with
/// Y = truncation_multiplier / (slowest decay rate), k = y_derivative in {0, 1}.
/// Throws QuadratureBudgetError when any point fails to converge.
KernelApplication apply_kernel(const KernelSpec& spec, const ScalarModeProfile& rhs, const std::vector<double>& y_grid,
                               const QuadratureCfg& cfg, int y_derivative = 0);

/// Exact kernel application for profiles built from exponential terms (tables use product integration).
ScalarModeProfile apply_kernel_closed_form(const KernelSpec& spec, const ScalarModeProfile& rhs);

enum class PressureKind { dirichlet, neumann };

/// Velocity driven by a harmonic pressure p = c e^{-|xi| y}: omega^2 u - mu u'' = -grad p,
/// div u = 0 at y = 0 and the homogeneous tangential condition alpha. Built from the kernels
/// (G_-, G_+ for alpha = 0; K_v, K_w for alpha = +-1).
VectorModeProfile parabolic_solve_mode(const ModeParams& mode, int alpha, const ScalarModeProfile& pressure,
                                       PressureKind kind);

/// General resolvent: omega^2 u - mu u'' = F (decaying), tangential boundary operator
/// of type alpha equal to `tangential_datum`, div u(0) = `divergence_datum`.
/// Also valid for the mean mode xi = 0.
VectorModeProfile parabolic_resolvent_mode(const ModeParams& mode, int alpha, const VectorModeProfile& forcing,
                                           const std::vector<cplx>& tangential_datum, cplx divergence_datum);

struct FdSolution {
  YGridPtr grid;
  VectorModeProfile velocity;  // tabulated on grid
  double rcond = 0.0;          // reciprocal 1-norm condition estimate of the banded system
};

/// Second-order finite-difference solution of the two-point problem behind parabolic_solve_mode,
/// with homogeneous Dirichlet data at y = Y. Throws IllConditionedError for rcond < 1e-14 and
/// DomainError when the grid has fewer than 8 points per decay length where the solution is non-negligible.
FdSolution oracle_fd_solve(const ModeParams& mode, int alpha, const ScalarModeProfile& pressure, const YGridPtr& grid);

enum class TraceRelation { T00, T10, T11 };
std::string to_string(TraceRelation r);

/// Boundary traces computed by kernel quadrature against symbol_core.trace_multiplier, h = 1:
///   T00 (alpha = 0) and T10 (alpha = +-1): w(0) from the Neumann pressure (1/|xi|) e^{-|xi| y},
///     multiplier of (alpha, 0) times w(0) should equal 1;
///   T11: normal stress -2 mu w'(0) + p(0) from the Dirichlet pressure e^{-|xi| y},
///     multiplier of (alpha, +1) times the stress should equal 1.
VerificationReport verify_trace_relations(const std::vector<ModeParams>& modes, int alpha, TraceRelation relation,
                                          const QuadratureCfg& cfg, Execution exec = Execution::parallel);

}  // namespace hstokes
