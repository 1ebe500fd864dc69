// SPDX-License-Identifier: Apache-2.0
//
// One-mode solutions of the shifted Stokes system on the halfspace
//   omega^2 u - mu u'' + grad p = rho f,   div u = g,
//   tangential boundary operator (alpha) = h_t,  normal boundary operator (beta) = h_w,
// where omega^2 = rho lambda_eps + mu |xi|^2 and grad = (i xi, d/dy).
#pragma once

#include <optional>
#include <vector>

#include "hstokes/profile.hpp"
#include "hstokes/symbol_core.hpp"

namespace hstokes {

struct AnsatzCoefficients {
  CVector z_v;  // n - 1 entries, weight of the e^{-s y} modes
  cplx z_w;     // weight of the e^{-|xi| y} (pressure) mode
};

struct ModeProfile {
  ModeParams mode;
  VectorModeProfile velocity;
  ScalarModeProfile pressure;
  std::optional<AnsatzCoefficients> ansatz;

  int dim() const { return mode.dim(); }

  /// v = omega z_v e^{-s y} - i zeta z_w e^{-|xi| y},  w = i zeta . z_v e^{-s y} + |zeta| z_w e^{-|xi| y},
  /// p = kappa lambda_eps z_w e^{-|xi| y}.
  static ModeProfile from_ansatz(const ModeParams& mode, const CVector& z_v, cplx z_w);
  static ModeProfile zero(const ModeParams& mode);

  /// Profile of the partner mode -xi (with conj(lambda)) making the synthesized field real.
  ModeProfile conj() const;
  /// Sum of two profiles of the same mode; the ansatz is kept when both carry one.
  ModeProfile& operator+=(const ModeProfile& o);
  ModeProfile& operator*=(cplx s);
};

/// Tangential operator: alpha = 0 gives v(0); alpha = +-1 gives -+mu v'(0) - mu i xi w(0).
/// Normal operator: beta = 0 gives w(0); beta = +1 gives -2 mu w'(0) + p(0); beta = -1 gives p(0).
struct BoundaryValues {
  std::vector<cplx> tangential;
  cplx normal;
  cplx divergence;                      // div u at y = 0
  std::vector<double> tangential_scale; // magnitudes of the summands, for relative checks
  double normal_scale = 0.0;
};

BoundaryValues boundary_values(const ModeProfile& profile, const BcSpec& bc);

struct ModeResiduals {
  double momentum = 0.0;    // normwise sup over the sample points
  double divergence = 0.0;  // sup |div u| / sup |w'|, relative to the datum when g is given
  double tangential = 0.0;  // |B_t u - h_t| over the summand magnitudes
  double normal = 0.0;      // |B_n u - h_w| / |h_w| (absolute when h_w = 0)
};

struct ModeData {
  VectorModeProfile f;
  ScalarModeProfile g;
  std::vector<cplx> h_t;
  cplx h_w;
};

/// Residuals of the assembled solution against the data on `y_samples`.
ModeResiduals mode_residuals(const ModeProfile& profile, const BcSpec& bc, const ModeData& data,
                             const std::vector<double>& y_samples);

/// Data (f, g, h_t, h_w) generated by a known profile: f = (omega^2 u - mu u'' + grad p) / rho.
ModeData forward_data(const ModeProfile& profile, const BcSpec& bc);

/// Homogeneous-equation solve with zero tangential datum and normal datum h_w.
/// beta in {0, +1}: closed-form symbol inverse. beta = -1: pressure h_w e^{-|xi| y}, velocity from the
/// kernel construction of parabolic_div.
ModeProfile solve_mode(const ModeParams& mode, const BcSpec& bc, cplx h_w);

struct SplittingResult {
  ModeProfile profile;
  ScalarModeProfile step1_pressure;   // divergence-adjusting pressure plus the beta offset
  ModeProfile step2;                  // parabolic stage (velocity and pressure)
  cplx residual_datum = 0.0;          // datum handed to solve_mode in step 3
  bool step3_applied = false;
};

/// Three-step splitting: (1) divergence pressure and trace offset, (2) parabolic problem with the
/// divergence boundary condition and Weyl-projected force, (3) solve_mode on the remaining normal datum
/// (skipped for beta = -1). Errors are rethrown with the failing step named.
SplittingResult splitting_solve_mode(const ModeParams& mode, const BcSpec& bc, const VectorModeProfile& f,
                                     const ScalarModeProfile& g, cplx h_w, const std::vector<cplx>& h_t = {});

}  // namespace hstokes
