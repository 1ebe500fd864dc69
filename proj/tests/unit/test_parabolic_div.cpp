#include <doctest.h>

#include <cmath>

#include "hstokes/errors.hpp"
#include "hstokes/parabolic_div.hpp"

using namespace hstokes;

namespace {

ModeParams unit_mode() { return derive_mode({1.0, 1.0, 1.0}, 0.0, {1.0}); }

std::vector<ModeParams> small_sweep() {
  return {unit_mode(),
          derive_mode({0.3, 2.0, 0.01}, cplx(0.0, 40.0), {0.02, 0.05}),
          derive_mode({5.0, 0.2, 100.0}, cplx(0.0, 7.0), {60.0}),
          derive_mode({1.0, 3.0, 1.0}, cplx(0.0, 0.5), {0.3, -0.2, 0.1}),
          derive_mode({0.1, 1.0, 0.01}, 0.0, {100.0})};
}

// Normwise: sup |omega^2 u - mu u'' + grad p| over sup of the individual term magnitudes, y in [0, 10/k].
double momentum_residual(const ModeParams& m, const VectorModeProfile& u, const ScalarModeProfile& p) {
  const VectorModeProfile gp = mode_gradient(m.xi, p);
  double res = 0.0, scale = 0.0;
  const double ymax = 10.0 / m.xi_norm;
  for (int i = 0; i <= 200; ++i) {
    const double y = ymax * i / 200.0;
    for (int c = 0; c < m.dim(); ++c) {
      const cplx a = m.omega * m.omega * u.component(c).value(y);
      const cplx b = m.constants.mu * u.component(c).derivative(y, 2);
      const cplx g = gp.component(c).value(y);
      res = std::max(res, std::abs(a - b + g));
      scale = std::max({scale, std::abs(a), std::abs(b), std::abs(g)});
    }
  }
  return res / scale;
}

double divergence_sup(const ModeParams& m, const VectorModeProfile& u) {
  const ScalarModeProfile d = mode_divergence(m.xi, u);
  double res = 0.0, scale = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double y = 10.0 / m.xi_norm * i / 200.0;
    res = std::max(res, std::abs(d.value(y)));
    scale = std::max(scale, std::abs(u.normal.derivative(y)));
  }
  return res / scale;
}

}  // namespace

TEST_SUITE("parabolic_div") {

TEST_CASE("kernel values") {
  const ModeParams m = unit_mode();
  const KernelSpec g{KernelKind::G, m};
  CHECK(std::abs(eval_kernel(g, 0.7, 0.7) - 1.0 / (2.0 * std::sqrt(2.0))) < 1e-16);
  CHECK(eval_kernel(g, 0.3, 1.9) == eval_kernel(g, 1.9, 0.3));
  const KernelSpec gm{KernelKind::G_minus, m};
  for (double eta : {0.1, 1.0, 5.0}) CHECK(std::abs(eval_kernel(gm, 0.0, eta)) == 0.0);
  const KernelSpec gp{KernelKind::G_plus, m};
  CHECK(std::abs(eval_kernel_dy(gp, 0.0, 0.8)) < 1e-16);
  const KernelSpec kw{KernelKind::Kw_plus, m};
  CHECK(std::abs(eval_kernel(kw, 0.0, 1.0) - 0.19564523917031266481) < 1e-15);
}

TEST_CASE("apply_kernel: quadrature and closed form") {
  const ModeParams m = unit_mode();
  const KernelSpec gp{KernelKind::G_plus, m};
  QuadratureCfg cfg;
  const auto app = apply_kernel(gp, ScalarModeProfile::exponential(1.0, 1.0), {0.0, 0.5, 3.0}, cfg);
  CHECK(std::abs(app.values[0] - 0.2928932188134524756) < 1e-12);
  CHECK(app.max_rel_gap < cfg.rel_tol);

  const auto zero = apply_kernel(gp, ScalarModeProfile(), {0.0, 1.0}, cfg);
  CHECK(zero.values[0] == 0.0);

  const ModeParams c = derive_mode({0.4, 2.5, 0.01}, cplx(0.0, 12.0), {0.7, 0.2});
  const ScalarModeProfile f1 = ScalarModeProfile::exponential(cplx(1.0, -1.0), cplx(0.9, 0.3));
  const ScalarModeProfile f2 = ScalarModeProfile::exponential(0.5, 2.0, 1);
  for (KernelKind kind : {KernelKind::Kv_plus, KernelKind::Kv_minus, KernelKind::Kw_plus, KernelKind::Kw_minus}) {
    const KernelSpec ks{kind, c};
    const std::vector<double> ys = {0.0, 0.4, 2.0};
    const auto a1 = apply_kernel(ks, f1, ys, cfg);
    const auto a2 = apply_kernel(ks, f2, ys, cfg);
    const auto a12 = apply_kernel(ks, f1 + cplx(3.0) * f2, ys, cfg);
    CAPTURE(ks.name());
    CHECK(a12.max_rel_gap < cfg.rel_tol);
    for (std::size_t i = 0; i < ys.size(); ++i) {
      CHECK(std::abs(a12.values[i] - a1.values[i] - 3.0 * a2.values[i]) < 1e-10 * std::abs(a12.values[i]) + 1e-14);
    }
    const auto d = apply_kernel(ks, f1, ys, cfg, 1);
    CHECK(d.max_rel_gap < cfg.rel_tol);
  }
}

TEST_CASE("apply_kernel reports an exhausted budget") {
  QuadratureCfg cfg;
  cfg.max_subdivisions = 1;
  cfg.rel_tol = 1e-15;
  const KernelSpec gp{KernelKind::G_plus, derive_mode({1.0, 0.1, 1.0}, cplx(0.0, 90.0), {0.05})};
  CHECK_THROWS_AS(apply_kernel(gp, ScalarModeProfile::exponential(1.0, 0.05), {0.0}, cfg), QuadratureBudgetError);
}

TEST_CASE("harmonic-pressure solutions satisfy the equations and boundary conditions") {
  for (const ModeParams& m : small_sweep()) {
    const ScalarModeProfile p = ScalarModeProfile::exponential(cplx(0.8, -0.6), m.xi_norm);
    for (int alpha : {-1, 0, 1}) {
      const VectorModeProfile u = parabolic_solve_mode(m, alpha, p, PressureKind::dirichlet);
      CAPTURE(alpha);
      CHECK(momentum_residual(m, u, p) < 1e-9);
      CHECK(divergence_sup(m, u) < 1e-10);
      const double mu = m.constants.mu;
      for (int j = 0; j < m.dim() - 1; ++j) {
        const cplx bc = alpha == 0 ? u.tangential[j].value(0.0)
                                   : -alpha * mu * u.tangential[j].derivative(0.0) -
                                         mu * kI * m.xi[j] * u.normal.value(0.0);
        const double scale = std::abs(mu * u.tangential[j].derivative(0.0)) + std::abs(u.tangential[j].value(0.0)) +
                             std::abs(mu * m.xi[j] * u.normal.value(0.0));
        CHECK(std::abs(bc) <= 1e-12 * scale + 1e-300);
      }
    }
  }
}

TEST_CASE("harmonic-pressure solve: edge cases") {
  const ModeParams m = unit_mode();
  const VectorModeProfile z = parabolic_solve_mode(m, 1, ScalarModeProfile(), PressureKind::neumann);
  CHECK(z.normal.is_zero());
  CHECK_THROWS_AS(parabolic_solve_mode(m, 0, ScalarModeProfile::exponential(1.0, 2.0), PressureKind::dirichlet),
                  IncompatibleDataError);
  CHECK_THROWS_AS(parabolic_solve_mode(derive_mode({1, 1, 1}, 0.0, {0.0}), 0, ScalarModeProfile(), PressureKind::dirichlet),
                  ZeroModeError);
}

TEST_CASE("general resolvent agrees with the kernel construction") {
  for (const ModeParams& m : small_sweep()) {
    const ScalarModeProfile p = ScalarModeProfile::exponential(cplx(1.0, 0.5), m.xi_norm);
    for (int alpha : {-1, 0, 1}) {
      const VectorModeProfile a = parabolic_solve_mode(m, alpha, p, PressureKind::neumann);
      const VectorModeProfile b = parabolic_resolvent_mode(m, alpha, cplx(-1.0) * mode_gradient(m.xi, p),
                                                           std::vector<cplx>(m.dim() - 1, 0.0), 0.0);
      double gap = 0.0, scale = 0.0;
      for (int i = 0; i <= 100; ++i) {
        const double y = 8.0 / m.xi_norm * i / 100.0;
        for (int c = 0; c < m.dim(); ++c) {
          gap = std::max(gap, std::abs(a.component(c).value(y) - b.component(c).value(y)));
          scale = std::max(scale, std::abs(a.component(c).value(y)));
        }
      }
      // alpha = -1 has condition number ~ mu |xi|^2 / (rho lambda_eps), about 1e7 for the last mode.
      CAPTURE(alpha);
      CHECK(gap <= (alpha == -1 ? 1e-8 : 1e-10) * scale);
    }
  }
}

TEST_CASE("general resolvent meets inhomogeneous boundary data") {
  const ModeParams m = derive_mode({1.5, 0.6, 0.3}, cplx(0.0, 3.0), {0.4, -0.9});
  VectorModeProfile f(3);
  f.tangential[0] = ScalarModeProfile::exponential(cplx(1.0, 2.0), 1.3);
  f.tangential[1] = ScalarModeProfile::exponential(-0.7, cplx(0.8, 0.5), 1);
  f.normal = ScalarModeProfile::exponential(cplx(0.2, -0.4), 2.1);
  const std::vector<cplx> h = {cplx(0.3, 0.1), cplx(-1.0, 0.4)};
  const cplx g0(0.25, -0.5);
  const double mu = m.constants.mu;
  for (int alpha : {-1, 0, 1}) {
    const VectorModeProfile u = parabolic_resolvent_mode(m, alpha, f, h, g0);
    for (int j = 0; j < 2; ++j) {
      const cplx bc = alpha == 0 ? u.tangential[j].value(0.0)
                                 : -alpha * mu * u.tangential[j].derivative(0.0) - mu * kI * m.xi[j] * u.normal.value(0.0);
      CHECK(std::abs(bc - h[j]) < 1e-13);
    }
    CHECK(std::abs(mode_divergence(m.xi, u).value(0.0) - g0) < 1e-13);
    for (double y : {0.2, 1.5}) {
      for (int c = 0; c < 3; ++c) {
        const cplx r = m.omega * m.omega * u.component(c).value(y) - mu * u.component(c).derivative(y, 2) -
                       f.component(c).value(y);
        CHECK(std::abs(r) < 1e-12);
      }
    }
  }
  // The mean mode is admissible for the resolvent.
  const ModeParams z = derive_mode({1.0, 1.0, 2.0}, 0.0, {0.0});
  VectorModeProfile fz(2);
  fz.tangential[0] = ScalarModeProfile::exponential(1.0, 3.0);
  const VectorModeProfile uz = parabolic_resolvent_mode(z, 0, fz, {0.0}, 0.0);
  CHECK(std::abs(uz.tangential[0].value(0.0)) < 1e-15);
}

TEST_CASE("finite-difference oracle") {
  const ModeParams m = derive_mode({1.0, 1.0, 1.0}, cplx(0.0, 2.0), {1.0});
  auto grid = YGrid::graded(129, 25.0, 1.02);
  const FdSolution zero = oracle_fd_solve(m, 1, ScalarModeProfile(), grid);
  for (cplx v : zero.velocity.normal.table()->values) CHECK(v == 0.0);

  const ScalarModeProfile p = ScalarModeProfile::exponential(1.0, 1.0);
  const VectorModeProfile exact = parabolic_solve_mode(m, 0, p, PressureKind::dirichlet);
  double err[2];
  auto g = grid;
  for (int l = 0; l < 2; ++l, g = g->refined()) {
    const FdSolution s = oracle_fd_solve(m, 0, p, g);
    CHECK(s.rcond > 1e-10);
    err[l] = 0.0;
    for (int i = 0; i < g->size(); ++i) {
      err[l] = std::max(err[l], std::abs(s.velocity.normal.table()->values[i] - exact.normal.value(g->nodes()[i])));
    }
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.15));

  CHECK_THROWS_AS(oracle_fd_solve(m, 0, p, YGrid::uniform(9, 25.0)), DomainError);
}

TEST_CASE("trace relations") {
  QuadratureCfg cfg;
  const auto modes = small_sweep();
  const auto t00 = verify_trace_relations(modes, 0, TraceRelation::T00, cfg);
  CHECK(t00.passed());
  CHECK(t00.max_error < 1e-12);
  for (int a : {-1, 1}) {
    CHECK(verify_trace_relations(modes, a, TraceRelation::T10, cfg).max_error < 1e-12);
  }
  for (int a : {-1, 0, 1}) {
    CHECK(verify_trace_relations(modes, a, TraceRelation::T11, cfg).max_error < 1e-12);
  }
  // alpha = -1 reduction: the trace equals 1 / (rho lambda_eps).
  const auto tm = verify_trace_relations(modes, -1, TraceRelation::T10, cfg, Execution::serial);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const cplx trace(tm.rows[i].metric("trace_re"), tm.rows[i].metric("trace_im"));
    CHECK(std::abs(trace * modes[i].rho_lambda_eps - 1.0) < 1e-10);
  }
  // alpha = 0 normal stress: identity multiplier, trace equals h.
  const auto t11 = verify_trace_relations(modes, 0, TraceRelation::T11, cfg, Execution::serial);
  for (const auto& row : t11.rows) CHECK(row.metric("trace_re") == doctest::Approx(1.0));

  CHECK_THROWS_AS(verify_trace_relations(modes, 1, TraceRelation::T00, cfg), DomainError);
  CHECK_THROWS_AS(verify_trace_relations(modes, 0, TraceRelation::T10, cfg), DomainError);
  CHECK_THROWS_AS(verify_trace_relations({derive_mode({1, 1, 1}, 0.0, {0.0})}, 0, TraceRelation::T00, cfg), ZeroModeError);
}

TEST_CASE("serial and parallel sweeps are bitwise identical") {
  QuadratureCfg cfg;
  const auto modes = small_sweep();
  const auto a = verify_trace_relations(modes, 1, TraceRelation::T11, cfg, Execution::serial);
  const auto b = verify_trace_relations(modes, 1, TraceRelation::T11, cfg, Execution::parallel);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].key == b.rows[i].key);
    CHECK(a.rows[i].metrics == b.rows[i].metrics);
  }
  CHECK(a.max_error == b.max_error);
}

}
