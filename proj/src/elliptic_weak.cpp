// SPDX-License-Identifier: Apache-2.0
#include "hstokes/elliptic_weak.hpp"

#include <cmath>

#include "hstokes/errors.hpp"

namespace hstokes {

namespace {

double nonzero_norm(const std::vector<double>& xi, const char* what) {
  double s = 0.0;
  for (double c : xi) s += c * c;
  const double k = std::sqrt(s);
  if (k == 0.0) {
    throw ZeroModeError(std::string(what) + ": the mean mode xi = 0 has no decaying halfspace solution");
  }
  return k;
}

// Sign of the image term: -1 for Dirichlet, +1 for Neumann.
double image_sign(EllipticBc bc) { return bc == EllipticBc::dirichlet_zero ? -1.0 : 1.0; }

}  // namespace

ScalarModeProfile dirichlet_extend_mode(const std::vector<double>& xi, cplx h) {
  const double k = nonzero_norm(xi, "dirichlet_extend_mode");
  return ScalarModeProfile::exponential(h, k);
}

ScalarModeProfile neumann_extend_mode(const std::vector<double>& xi, cplx h) {
  const double k = nonzero_norm(xi, "neumann_extend_mode");
  return ScalarModeProfile::exponential(h / k, k);
}

ScalarModeProfile solve_elliptic_mode(const std::vector<double>& xi, const ScalarModeProfile& rhs, EllipticBc bc) {
  const double k = nonzero_norm(xi, "solve_elliptic_mode");
  rhs.require_decay("solve_elliptic_mode");
  const double sg = image_sign(bc);
  ScalarModeProfile q = half_line_convolution(rhs, k, Parity::even);
  q += ScalarModeProfile::exponential(sg * laplace_moment(rhs, k), k);
  return q * cplx(1.0 / (2.0 * k));
}

ScalarModeProfile solve_weak_elliptic_mode(const std::vector<double>& xi, const VectorModeProfile& f, EllipticBc bc) {
  const double k = nonzero_norm(xi, "solve_weak_elliptic_mode");
  if (f.dim() != static_cast<int>(xi.size()) + 1) throw DomainError("solve_weak_elliptic_mode: dimension mismatch");
  bool closed = true;
  for (int c = 0; c < f.dim(); ++c) closed = closed && !f.component(c).has_table();
  if (closed && bc == EllipticBc::dirichlet_zero) return solve_elliptic_mode(xi, mode_divergence(xi, f), bc);
  const double sg = image_sign(bc);
  // int k(y, eta) (i xi . f_tan)(eta) d eta
  const ScalarModeProfile tang = tangential_dot(xi, f);
  ScalarModeProfile q = half_line_convolution(tang, k, Parity::even);
  q += ScalarModeProfile::exponential(sg * laplace_moment(tang, k), k);
  q *= cplx(1.0 / (2.0 * k));
  // - int d/d eta k(y, eta) f_normal(eta) d eta
  ScalarModeProfile normal = half_line_convolution(f.normal, k, Parity::odd);
  normal += ScalarModeProfile::exponential(-sg * laplace_moment(f.normal, k), k);
  q -= normal * cplx(0.5);
  return q;
}

VectorModeProfile weyl_project_mode(const std::vector<double>& xi, const VectorModeProfile& f) {
  const ScalarModeProfile q = solve_weak_elliptic_mode(xi, cplx(-1.0) * f, EllipticBc::dirichlet_zero);
  return f - mode_gradient(xi, q);
}

VectorModeProfile helmholtz_project_mode(const std::vector<double>& xi, const VectorModeProfile& f) {
  const ScalarModeProfile q = solve_weak_elliptic_mode(xi, cplx(-1.0) * f, EllipticBc::neumann_zero);
  return f - mode_gradient(xi, q);
}

ScalarModeProfile divergence_pressure_source(const ModeParams& mode, const ScalarModeProfile& g) {
  // div((rho lambda_eps - mu Delta) grad q_hat) with Delta q_hat = g.
  ScalarModeProfile src = g * mode.rho_lambda_eps;
  src -= mode_divergence(mode.xi, mode_gradient(mode.xi, g)) * cplx(mode.constants.mu);
  return src;
}

ScalarModeProfile divergence_pressure_mode(const ModeParams& mode, const ScalarModeProfile& g, cplx eta) {
  if (mode.is_zero_mode()) throw ZeroModeError("divergence_pressure_mode: xi = 0");
  g.require_decay("divergence_pressure_mode");
  const auto& xi = mode.xi;
  if (!g.has_table()) return solve_elliptic_mode(xi, divergence_pressure_source(mode, g), EllipticBc::dirichlet_zero);
  ScalarModeProfile q_hat = solve_elliptic_mode(xi, -g, EllipticBc::neumann_zero);
  if (eta != 0.0) q_hat += neumann_extend_mode(xi, eta);
  // (rho lambda_eps - mu Delta) grad q_hat, using Delta grad q_hat = grad g.
  VectorModeProfile transported = mode.rho_lambda_eps * mode_gradient(xi, q_hat);
  transported -= cplx(mode.constants.mu) * mode_gradient(xi, g);
  // grad q = -(I - W) transported, and (I - W) F = grad of the Dirichlet potential of -F.
  return solve_weak_elliptic_mode(xi, transported, EllipticBc::dirichlet_zero);
}

}  // namespace hstokes
