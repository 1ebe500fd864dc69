#include <doctest.h>

#include <cmath>

#include "hstokes/elliptic_weak.hpp"
#include "hstokes/errors.hpp"

using namespace hstokes;

namespace {

VectorModeProfile sample_field(int n) {
  VectorModeProfile f(n);
  for (int j = 0; j < n - 1; ++j) {
    f.tangential[j] = ScalarModeProfile::exponential(cplx(0.5 + j, -0.2), cplx(1.1 + 0.3 * j, 0.4)) +
                      ScalarModeProfile::exponential(0.3, 2.5, 1);
  }
  f.normal = ScalarModeProfile::exponential(cplx(1.0, 0.3), 0.7) + ScalarModeProfile::exponential(-0.4, 1.9);
  return f;
}

double sup_on(const ScalarModeProfile& p, double ymax = 12.0) {
  double m = 0.0;
  for (int i = 0; i <= 120; ++i) m = std::max(m, std::abs(p.value(ymax * i / 120.0)));
  return m;
}

}  // namespace

TEST_SUITE("elliptic_weak") {

TEST_CASE("harmonic extensions") {
  const ScalarModeProfile d = dirichlet_extend_mode({1.0}, 1.0);
  CHECK(d.value(1.0).real() == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  const ScalarModeProfile nmode = neumann_extend_mode({0.6, 0.8}, cplx(2.0, 1.0));
  CHECK(std::abs(-nmode.derivative(0.0) - cplx(2.0, 1.0)) < 1e-15);
  CHECK_THROWS_AS(dirichlet_extend_mode({0.0}, 1.0), ZeroModeError);
}

TEST_CASE("strong solves satisfy the ODE and boundary condition") {
  const std::vector<double> xi = {0.6, -1.2};
  const double k = std::sqrt(0.36 + 1.44);
  const ScalarModeProfile rhs = ScalarModeProfile::exponential(cplx(1.0, 2.0), cplx(0.9, 0.5)) +
                                ScalarModeProfile::exponential(0.5, k, 1);
  for (EllipticBc bc : {EllipticBc::dirichlet_zero, EllipticBc::neumann_zero}) {
    const ScalarModeProfile q = solve_elliptic_mode(xi, rhs, bc);
    for (double y : {0.0, 0.3, 2.0, 7.0}) {
      CHECK(std::abs(k * k * q.value(y) - q.derivative(y, 2) - rhs.value(y)) < 1e-12);
    }
    if (bc == EllipticBc::dirichlet_zero) CHECK(std::abs(q.value(0.0)) < 1e-14);
    else CHECK(std::abs(q.derivative(0.0)) < 1e-14);
  }
}

TEST_CASE("weak Neumann solve obeys the natural boundary condition") {
  const std::vector<double> xi = {0.8};
  const VectorModeProfile f = sample_field(2);
  const ScalarModeProfile q = solve_weak_elliptic_mode(xi, f, EllipticBc::neumann_zero);
  CHECK(std::abs(q.derivative(0.0) + f.normal.value(0.0)) < 1e-13);
  // -Delta q = div f in the interior.
  const ScalarModeProfile divf = mode_divergence(xi, f);
  for (double y : {0.2, 1.0, 4.0}) CHECK(std::abs(0.64 * q.value(y) - q.derivative(y, 2) - divf.value(y)) < 1e-12);
  const ScalarModeProfile qd = solve_weak_elliptic_mode(xi, f, EllipticBc::dirichlet_zero);
  CHECK(std::abs(qd.value(0.0)) < 1e-14);
}

TEST_CASE("projections") {
  const std::vector<double> xi = {0.5, 1.5};
  const VectorModeProfile f = sample_field(3);
  const VectorModeProfile w = weyl_project_mode(xi, f);
  CHECK(sup_on(mode_divergence(xi, w)) < 1e-13);
  const VectorModeProfile h = helmholtz_project_mode(xi, f);
  CHECK(sup_on(mode_divergence(xi, h)) < 1e-13);
  CHECK(std::abs(h.normal.value(0.0)) < 1e-14);
  // Idempotence of the Weyl projection.
  const VectorModeProfile ww = weyl_project_mode(xi, w);
  for (int i = 0; i < 3; ++i) CHECK(sup_on(ww.component(i) - w.component(i)) < 1e-13);
}

TEST_CASE("divergence pressure matches the direct ODE and ignores eta") {
  const ModeParams m = derive_mode({1.3, 0.7, 0.5}, cplx(0.0, 4.0), {0.9, -0.3});
  const ScalarModeProfile g = ScalarModeProfile::exponential(cplx(1.0, -0.5), cplx(1.4, 0.2)) +
                              ScalarModeProfile::exponential(0.8, 2.2, 1);
  const ScalarModeProfile q = divergence_pressure_mode(m, g);
  const double k = m.xi_norm;
  const ScalarModeProfile rhs = (m.rho_lambda_eps + m.constants.mu * k * k) * g - cplx(m.constants.mu) * g.derivative_profile().derivative_profile();
  const ScalarModeProfile oracle = solve_elliptic_mode(m.xi, rhs, EllipticBc::dirichlet_zero);
  CHECK(sup_on(q - oracle) < 1e-12 * sup_on(oracle));
  const ScalarModeProfile qe = divergence_pressure_mode(m, g, cplx(3.0, -2.0));
  CHECK(sup_on(qe - q) < 1e-12 * sup_on(q));
  CHECK_THROWS_AS(divergence_pressure_mode(derive_mode({1, 1, 1}, 0.0, {0.0}), g), ZeroModeError);
}

}
