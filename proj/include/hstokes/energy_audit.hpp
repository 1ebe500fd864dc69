// SPDX-License-Identifier: Apache-2.0
//
// Kinetic-energy bookkeeping on sampled fields. Conventions: J_ij = d_j u_i with coordinates
// (x_0, ..., x_{n-2}, y); D = sym J, R = antisym J, S = 2 mu D - p I, T = 2 mu R - p I; the boundary
// is y = 0 with outward normal nu = -e_y. Only the y = 0 face contributes (tangentially periodic box).
#pragma once

#include <string>
#include <vector>

#include "hstokes/field.hpp"
#include "hstokes/symbol_core.hpp"

namespace hstokes {

struct TensorField {
  int n = 0;
  std::vector<std::vector<double>> c;  // component (i, j) at c[i * n + j]

  TensorField() = default;
  TensorField(int n, std::size_t points) : n(n), c(static_cast<std::size_t>(n * n), std::vector<double>(points, 0.0)) {}
  std::vector<double>& at(int i, int j) { return c[static_cast<std::size_t>(i * n + j)]; }
  const std::vector<double>& at(int i, int j) const { return c[static_cast<std::size_t>(i * n + j)]; }
};

struct TensorSet {
  TensorField gradient, D, R, S, T;
  std::vector<std::string> warnings;
};

/// Numerical gradient: spectral in x, fourth-order finite differences in y.
TensorField gradient_tensor(const SampledField& field);
/// D, R, S, T from a given gradient (exact by construction: D + R = J).
TensorSet tensors_from_gradient(const SampledField& field, const TensorField& gradient, const FluidConstants& constants);
/// Numerical gradient plus a resolution check against second-order y-differences.
TensorSet tensors(const SampledField& field, const FluidConstants& constants);

struct BoundaryPowers {
  double power_s = 0.0;       // int u . S nu
  double power_ns = 0.0;      // int u . S nu - rho/2 |u|^2 (u . nu)
  double power_s_alt = 0.0;   // int u . T nu
  double power_ns_alt = 0.0;  // int u . T nu - rho/2 |u|^2 (u . nu)
  double area = 0.0;          // |Gamma| of one period cell
  double sup_u = 0.0, sup_S = 0.0, sup_T = 0.0;  // boundary sup norms
};

/// Scale for relative checks of the NS powers: |u| |S| |Gamma| + rho/2 |u|^3 |Gamma| with domain sup norms.
inline double field_scale(double sup_u, double sup_S, double area, double rho) {
  return sup_u * sup_S * area + 0.5 * rho * sup_u * sup_u * sup_u * area;
}

/// Boundary power functionals by the periodic trapezoid rule on y = 0.
BoundaryPowers boundary_powers(const SampledField& field, const TensorSet& t, const FluidConstants& constants);

double power_s(const SampledField& field, const TensorSet& t, const FluidConstants& constants);
double power_ns(const SampledField& field, const TensorSet& t, const FluidConstants& constants);
double power_s_alt(const SampledField& field, const TensorSet& t, const FluidConstants& constants);
double power_ns_alt(const SampledField& field, const TensorSet& t, const FluidConstants& constants);

/// Max pointwise gap on y = 0 between u . S nu and (u . nu)(S nu . nu) + P u . P S nu.
double stress_split_gap(const SampledField& field, const TensorSet& t);

/// Boundary term int_Gamma u_i d_i u . nu, equal to int (|D|^2 - |R|^2) for divergence-free fields
/// that vanish at y = Y.
double gradient_transpose_boundary_term(const SampledField& field, const TensorSet& t);

/// Integral over the period cell times [0, Y] (periodic trapezoid in x, fourth-order rule in y).
double volume_integral(const TensorGrid& grid, const std::vector<double>& values);

struct EnergySnapshot {
  double time = 0.0;
  double kinetic = 0.0;        // rho/2 int |u|^2
  double dissipation_D = 0.0;  // 2 mu int |D|^2
  double dissipation_R = 0.0;  // 2 mu int |R|^2
  double forcing_power = 0.0;  // rho int f . u
  BoundaryPowers powers;
};

/// Refuses (DomainError) when the y = Y face carries |u| >= 1e-8.
EnergySnapshot energy_snapshot(const SampledField& field, const TensorSet& t, const FluidConstants& constants,
                               const SampledField* force = nullptr);

enum class EnergyModel { stokes, navier_stokes };

struct EnergyReport {
  EnergyModel model = EnergyModel::stokes;
  double dt = 0.0;
  std::vector<EnergySnapshot> snapshots;
  /// Residuals at interior snapshots k = 1 .. N-2, central difference of the kinetic energy:
  /// dE/dt + 2 mu int |D|^2 - power - forcing (D-form, power_s or power_ns) and the R/T-form.
  std::vector<double> residual_D, residual_R;
  double max_residual_D = 0.0, max_residual_R = 0.0;
  std::vector<std::string> warnings;
};

/// Needs at least three snapshots at uniform spacing dt. Forces, when given, align with the snapshots.
EnergyReport energy_balance_residual(const std::vector<SampledField>& series, double dt, const FluidConstants& constants,
                                     EnergyModel model, const std::vector<SampledField>& forces = {});

/// Single-mode Stokes evolution u(t) = 2 Re(e^{lambda_eps t} u_hat e^{i xi x}) with u_hat = solve_mode(bc, h_w),
/// sampled at t0 - dt, t0, t0 + dt. Each level halves dt and refines the y grid.
struct BalanceStudyCfg {
  BcSpec bc{1, -1};
  FluidConstants constants{1.0, 1.0, 0.5};
  cplx lambda{0.0, 1.0};
  double xi = 1.0;
  cplx h_w = 1.0;
  int nx = 8;
  int points = 129;
  double length = 30.0;
  double stretch = 1.03;
  double t0 = 1.0;
  double dt = 0.1;
  int levels = 3;
  void validate() const;
};

struct BalanceLevel {
  int points = 0;
  double dt = 0.0;
  EnergyReport report;
};

struct BalanceStudy {
  std::vector<BalanceLevel> levels;
  std::vector<double> order_D, order_R;  // log2 of consecutive residual ratios
};

BalanceStudy energy_balance_study(const BalanceStudyCfg& cfg);

struct ClassificationCfg {
  int trials = 100;
  std::uint64_t seed = 1;
  FluidConstants constants{1.0, 1.0, 1.0};
  int modes = 3;          // tangential wavenumbers 0 .. modes-1 in the stream function
  int nx = 32;
  double vanish_tol = 1e-10;  // B1: |pi_NS| relative to the field scale; B2: |pi_S| absolute
  double witness_tol = 1e-3;  // B3: |pi_S| and |pi_S_alt| above this
};

struct ClassificationVerdict {
  BcSpec bc;
  BcClass static_class = BcClass::B1;
  BcClass empirical_class = BcClass::B1;
  bool matches = false;
  int trials = 0;
  double max_rel_power_ns = 0.0;      // max over trials of max(|pi_NS|, |pi_NS_alt|) / field_scale
  double max_power_s_preserved = 0.0; // max |pi_S| (beta != -1) or |pi_S_alt| (beta = -1)
  double max_boundary_defect = 0.0;   // constraint residual of the trial fields
  int witness_trial = -1;             // first trial with both |pi_S|, |pi_S_alt| > witness_tol
  double witness_power_s = 0.0;
  double witness_power_s_alt = 0.0;
};

/// Randomized trial fields satisfying the homogeneous boundary conditions of bc (2D stream functions
/// with exact gradients), then empirical classification from the boundary powers.
ClassificationVerdict classify_bc(const BcSpec& bc, const ClassificationCfg& cfg);

struct CompatibilityCondition {
  std::string name;
  bool applicable = false;
  bool passed = true;
  double defect = 0.0;
  std::string note;
};

struct CompatibilityReport {
  std::vector<CompatibilityCondition> conditions;
  bool passed() const;
};

/// Initial-boundary compatibility: (C1) div u0 = g(0) always; (C2) tangential trace of u0 equals
/// the tangential datum for alpha = 0 and p > 3/2 (alpha = +-1: the first-order tangential operator,
/// p > 3); (C3) normal trace equals h_w for beta = 0 and p > 3/2. g is a sampled scalar on the field grid
/// (empty for zero); h_t / h_w are samples on the y = 0 plane (empty for zero).
CompatibilityReport check_compatibility(const SampledField& u0, const std::vector<double>& g,
                                        const std::vector<std::vector<double>>& h_t, const std::vector<double>& h_w,
                                        const BcSpec& bc, double p_exponent, const FluidConstants& constants,
                                        double tol = 1e-6);

}  // namespace hstokes
