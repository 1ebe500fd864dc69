// SPDX-License-Identifier: Apache-2.0
//
// Physical-space fields on a periodic tangential box (period 2 pi L per direction) times a
// graded wall-normal grid. Storage is plane-major: index = j * plane_size + flat tangential index,
// with the last tangential direction fastest.
#pragma once

#include <iosfwd>
#include <vector>

#include "hstokes/parallel.hpp"
#include "hstokes/profile.hpp"
#include "hstokes/stokes_halfspace.hpp"

namespace hstokes {

struct TensorGrid {
  int n = 2;               // space dimension
  double period_scale = 1.0;  // L: tangential period 2 pi L, lattice xi = m / L
  std::vector<int> nx;     // points per tangential direction (even, n - 1 entries)
  YGridPtr y;

  void validate() const;
  std::size_t plane_size() const;
  int ny() const { return y->size(); }
  std::size_t size() const { return plane_size() * static_cast<std::size_t>(ny()); }
  double x(int direction, int i) const;
  /// Tangential multi-index of a flat plane index.
  std::vector<int> unflatten(std::size_t flat) const;
  /// Wavenumber xi_d of FFT bin i (signed, Nyquist bin reported as -nx/2).
  double wavenumber(int direction, int bin) const;
};

struct SampledField {
  TensorGrid grid;
  std::vector<std::vector<double>> u;  // n components
  std::vector<double> p;
  double time = 0.0;
};

SampledField zero_field(const TensorGrid& grid);

struct FieldTerm {
  ModeProfile profile;
  cplx coefficient = 1.0;
};

/// u(x, y) = sum_terms c * u_hat(y) e^{i xi . x}. The set must be closed under xi -> -xi with conjugate
/// contributions (checked on the grid nodes), modes must lie on the lattice xi = m / L strictly below
/// the Nyquist index, and every closed-form decay rate r must satisfy r Y >= 18.
SampledField synthesize_field(const std::vector<FieldTerm>& terms, const TensorGrid& grid, double time = 0.0,
                              Execution exec = Execution::parallel);

/// Tangential Fourier coefficients of a sampled scalar, c[bin][j] with f = sum_bin c e^{i xi . x} on plane j.
std::vector<std::vector<cplx>> mode_coefficients(const TensorGrid& grid, const std::vector<double>& f);
/// Real part of the synthesis from mode_coefficients layout.
std::vector<double> synthesize_from_modes(const TensorGrid& grid, const std::vector<std::vector<cplx>>& c);

/// Spectral derivative along tangential direction d (Nyquist bin dropped for odd orders).
std::vector<double> derivative_x(const TensorGrid& grid, const std::vector<double>& f, int direction, int order = 1);
/// Fourth-order finite-difference derivative along y.
std::vector<double> derivative_y(const TensorGrid& grid, const std::vector<double>& f, int order = 1);

std::vector<double> divergence(const SampledField& field);

/// Residual rho lambda_eps u - mu Delta u + grad p - rho f per component, for real lambda >= 0
/// (a real field is a sum of lambda and conj(lambda) modes, so only real lambda gives one operator).
std::vector<std::vector<double>> stokes_residual(const SampledField& field, const FluidConstants& constants, double lambda,
                                                 const SampledField* force = nullptr);

/// Max |values| over planes j in [first, last).
double max_abs_planes(const TensorGrid& grid, const std::vector<double>& values, int first, int last);

/// One row per grid point: x_0, ..., x_{n-2}, y, u_0, ..., u_{n-1}, p, printed with %.17g.
void write_field_csv(const SampledField& field, std::ostream& out);

}  // namespace hstokes
