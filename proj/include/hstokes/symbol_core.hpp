// SPDX-License-Identifier: Apache-2.0
//
// Mode-level algebra of the halfspace Stokes resolvent: derived symbols of a
// Laplace-Fourier mode, the exponential ansatz, the boundary-symbol matrices
// with their closed-form inverses, and the scalar trace multipliers.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hstokes {

using cplx = std::complex<double>;
using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

inline constexpr cplx kI{0.0, 1.0};

struct FluidConstants {
  double rho = 1.0;
  double mu = 1.0;
  double epsilon = 1.0;

  /// Throws DomainError unless all three are finite and positive.
  void validate() const;
};

/// One (lambda, xi) mode with everything the halfspace formulas need.
struct ModeParams {
  FluidConstants constants;
  cplx lambda;
  std::vector<double> xi;

  cplx lambda_eps;           // epsilon + lambda
  std::vector<double> zeta;  // sqrt(mu) xi
  double xi_norm = 0.0;      // |xi|, decay rate of pressure modes
  double zeta_norm = 0.0;    // |zeta|
  double kappa = 0.0;        // rho sqrt(mu)
  cplx omega;                // principal sqrt(rho lambda_eps + mu |xi|^2)
  cplx rho_lambda_eps;       // rho lambda_eps, equal to omega^2 - |zeta|^2

  int dim() const { return static_cast<int>(xi.size()) + 1; }
  /// Decay rate omega / sqrt(mu) of the viscous (velocity) exponential.
  cplx velocity_rate() const;
  double pressure_rate() const { return xi_norm; }
  bool is_zero_mode() const { return xi_norm == 0.0; }
};

ModeParams derive_mode(const FluidConstants& constants, cplx lambda, std::vector<double> xi);

enum class BcClass { B1, B2, B3 };

/// Boundary operator selector: alpha picks the tangential part, beta the normal part.
struct BcSpec {
  int alpha = 0;
  int beta = 0;

  BcSpec() = default;
  BcSpec(int alpha, int beta);

  BcClass bc_class() const;
  bool preserves_navier_stokes() const { return bc_class() == BcClass::B1; }
  bool preserves_stokes() const { return bc_class() != BcClass::B3; }
  /// Catalog label such as "B1a" (no-slip) or "B3b".
  std::string label() const;
  std::string name() const;

  static std::vector<BcSpec> all();
  friend bool operator==(const BcSpec&, const BcSpec&) = default;
};

std::string to_string(BcClass c);

/// (n+1) x n map from coefficients (z_v, z_w) to (v(0), w(0), p(0)).
struct AnsatzMatrix {
  int n = 0;
  CMatrix entries;
  cplx velocity_rate;   // omega / sqrt(mu)
  double pressure_rate = 0.0;  // |xi|
};

AnsatzMatrix ansatz_matrix(const ModeParams& mode, int n);

/// Full n x n boundary symbol for beta in {0, +1}.
CMatrix boundary_symbol(const ModeParams& mode, const BcSpec& bc);

/// boundary_symbol = diag(prefactor) * reduced.
struct SymbolFactors {
  CVector prefactor;
  CMatrix reduced;
};

SymbolFactors boundary_symbol_factors(const ModeParams& mode, const BcSpec& bc);

struct SymbolInverse {
  CMatrix inverse;
  double condition = 0.0;  // infinity-norm condition number
  bool near_singular = false;
};

inline constexpr double kNearSingularCondition = 1e12;

/// Closed-form inverse of boundary_symbol, evaluated with cancellation-free
/// expressions for 1 - |zeta|/omega and its relatives.
SymbolInverse closed_form_inverse(const ModeParams& mode, const BcSpec& bc);

/// Coefficients (z_v, z_w) for tangential datum 0 and normal datum h_w.
CVector solve_symbol(const ModeParams& mode, const BcSpec& bc, cplx h_w);

/// beta = 0: T^alpha symbol; beta = +1: S^alpha symbol; beta = -1: 1.
cplx trace_multiplier(const ModeParams& mode, const BcSpec& bc);

/// Independent oracle: LU with partial pivoting carried out in long double.
CMatrix generic_inverse(const CMatrix& m);

/// Independent oracle for closed_form_inverse: the symbol is assembled from the mode inputs
/// (constants, lambda, xi) in quad precision and inverted by pivoted Gauss-Jordan elimination,
/// so the result is not limited by rounding of the double-precision symbol.
CMatrix reference_symbol_inverse(const ModeParams& mode, const BcSpec& bc);

/// ||m||_inf (max row sum of moduli).
double norm_inf(const CMatrix& m);

}  // namespace hstokes
