#include <doctest.h>

#include <cmath>

#include "hstokes/errors.hpp"
#include "hstokes/navier_stokes_local.hpp"

using namespace hstokes;

namespace {

TensorGrid strip(int nx, YGridPtr y) {
  TensorGrid g;
  g.n = 2;
  g.nx = {nx};
  g.y = std::move(y);
  return g;
}

// Stream function a sin(x) y^2 e^{-y}: divergence free, zero on y = 0 together with its normal derivative.
SampledField stream_field(const TensorGrid& g, double a) {
  SampledField f = zero_field(g);
  const std::size_t plane = g.plane_size();
  for (int j = 0; j < g.ny(); ++j) {
    const double y = g.y->nodes()[j];
    for (std::size_t i = 0; i < plane; ++i) {
      const double x = g.x(0, static_cast<int>(i));
      f.u[0][j * plane + i] = a * std::sin(x) * (2.0 * y - y * y) * std::exp(-y);
      f.u[1][j * plane + i] = -a * std::cos(x) * y * y * std::exp(-y);
    }
  }
  return f;
}

double sup_gap(const SampledField& a, const SampledField& b) {
  double g = 0.0;
  for (std::size_t c = 0; c < a.u.size(); ++c) {
    for (std::size_t k = 0; k < a.u[c].size(); ++k) g = std::max(g, std::abs(a.u[c][k] - b.u[c][k]));
  }
  return g;
}

}  // namespace

TEST_SUITE("navier_stokes_local") {

TEST_CASE("convective term of a single wave") {
  const TensorGrid g = strip(16, YGrid::graded(129, 20.0, 1.03));
  SampledField u = zero_field(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < 16; ++i) {
      const double e = std::exp(-g.y->nodes()[j]);
      u.u[0][j * 16 + i] = std::cos(g.x(0, i)) * e;
      u.u[1][j * 16 + i] = -std::sin(g.x(0, i)) * e;
    }
  }
  const SampledField zero = zero_field(g);
  const SampledField n = nonlinearity(zero, u);
  const SampledField m = nonlinearity(u, zero);
  double gap = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < 16; ++i) {
      const std::size_t k = j * 16 + i;
      gap = std::max({gap, std::abs(n.u[0][k]), std::abs(n.u[1][k] - std::exp(-2.0 * g.y->nodes()[j]))});
    }
  }
  CHECK(gap < 1e-6);
  CHECK(n.u == m.u);
  const SampledField z = nonlinearity(zero, zero);
  for (const auto& c : z.u) {
    for (double v : c) CHECK(v == 0.0);
  }
}

TEST_CASE("zero state stays zero") {
  const TensorGrid g = strip(8, YGrid::graded(65, 30.0, 1.05));
  const NsState s{zero_field(g), 0.0, {}};
  const NsState t = backward_euler_step(s, 0.01, BcSpec(0, 0), {1.0, 1.0, 1.0});
  for (const auto& c : t.field.u) {
    for (double v : c) CHECK(v == 0.0);
  }
  NsConfig cfg;
  cfg.horizon = 0.02;
  const NsRun run = picard_solve(zero_field(g), nullptr, cfg);
  CHECK(run.verdict == IterationVerdict::converged);
  REQUIRE(run.steps.size() == 2);
  CHECK(run.steps[0].gaps.size() == 1);
  CHECK(run.steps[0].ratios.empty());
}

TEST_CASE("linear step reproduces the closed-form mode solution") {
  const FluidConstants c{1.3, 0.7, 1.0};
  const double dt = 0.05;
  const TensorGrid g = strip(8, YGrid::graded(257, 40.0, 1.025));
  for (const BcSpec& bc : {BcSpec(0, 0), BcSpec(1, 1), BcSpec(-1, -1), BcSpec(0, -1)}) {
    CAPTURE(bc.name());
    const SampledField u0 = stream_field(g, 1.0);
    const NsState s{u0, 0.0, {}};
    const NsState t = backward_euler_step(s, dt, bc, c);

    // Mode xi = 1 carries u0 = (phi'/(2i), -phi/2) e^{ix} with phi = y^2 e^{-y}.
    const ModeParams m = derive_mode({c.rho, c.mu, 1.0 / dt}, 0.0, {1.0});
    const ScalarModeProfile phi = ScalarModeProfile::exponential(1.0, 1.0, 2);
    VectorModeProfile f(2);
    f.tangential[0] = phi.derivative_profile() * (1.0 / (2.0 * kI * dt));
    f.normal = phi * cplx(-0.5 / dt);
    const ModeProfile p = splitting_solve_mode(m, bc, f, ScalarModeProfile(), 0.0).profile;
    const SampledField want = synthesize_field({{p, 1.0}, {p.conj(), 1.0}}, g);
    double scale = 0.0;
    for (const auto& comp : want.u) {
      for (double v : comp) scale = std::max(scale, std::abs(v));
    }
    CHECK(sup_gap(t.field, want) / scale < 1e-8);
  }
}

TEST_CASE("manufactured forcing gives first order in time") {
  // u = a(t) U with U from the stream function 0.1 sin(x) y^2 e^{-y}, p = 0, a(t) = cos t.
  const FluidConstants c{1.0, 1.0, 1.0};
  const TensorGrid g = strip(16, YGrid::graded(129, 40.0, 1.05));
  const SampledField U = stream_field(g, 0.1);
  const std::size_t plane = g.plane_size();
  auto forcing = [&](double t) {
    SampledField f = zero_field(g);
    const double a = std::cos(t), da = -std::sin(t);
    for (int j = 0; j < g.ny(); ++j) {
      const double y = g.y->nodes()[j], e = 0.1 * std::exp(-y);
      const double p0 = y * y * e, p1 = (2 * y - y * y) * e, p2 = (2 - 4 * y + y * y) * e, p3 = (-6 + 6 * y - y * y) * e;
      for (std::size_t i = 0; i < plane; ++i) {
        const double s = std::sin(g.x(0, static_cast<int>(i))), co = std::cos(g.x(0, static_cast<int>(i)));
        const std::size_t k = j * plane + i;
        f.u[0][k] = da * U.u[0][k] + a * a * s * co * (p1 * p1 - p0 * p2) - c.mu / c.rho * a * s * (p3 - p1);
        f.u[1][k] = da * U.u[1][k] + a * a * p0 * p1 + c.mu / c.rho * a * co * (p2 - p0);
      }
    }
    return f;
  };
  const double T = 0.2;
  std::vector<double> err;
  for (double dt : {0.02, 0.01, 0.005}) {
    NsConfig cfg;
    cfg.constants = c;
    cfg.dt = dt;
    cfg.horizon = T;
    cfg.tol = 1e-12;
    const NsRun run = picard_solve(U, forcing, cfg);
    REQUIRE(run.verdict == IterationVerdict::converged);
    SampledField exact = U;
    for (auto& comp : exact.u) {
      for (double& v : comp) v *= std::cos(T);
    }
    err.push_back(sup_gap(run.states.back(), exact));
  }
  for (std::size_t k = 1; k < err.size(); ++k) CHECK(std::log2(err[k - 1] / err[k]) == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("small data no-slip run: contraction, energy, divergence") {
  const TensorGrid g = strip(16, YGrid::graded(129, 40.0, 1.05));
  NsConfig cfg;
  cfg.horizon = 0.05;
  const NsRun run = picard_solve(stream_field(g, 1e-3), nullptr, cfg);
  CHECK(run.verdict == IterationVerdict::converged);
  CHECK(run.warnings.empty());
  for (const auto& s : run.steps) {
    CHECK(s.gaps.back() < 1e-8);
    for (double r : s.ratios) CHECK(r < 0.5);
  }
  for (std::size_t k = 1; k < run.kinetic.size(); ++k) CHECK(run.kinetic[k] <= run.kinetic[k - 1]);
  for (double d : run.divergence) CHECK(d < 1e-6);
  for (double d : run.boundary_defect) CHECK(d < 1e-8);
}

TEST_CASE("stepping in two legs matches one run") {
  const TensorGrid g = strip(16, YGrid::graded(129, 40.0, 1.05));
  NsConfig cfg;
  cfg.horizon = 0.04;
  const NsRun whole = picard_solve(stream_field(g, 1e-2), nullptr, cfg);
  cfg.horizon = 0.02;
  const NsRun first = picard_solve(stream_field(g, 1e-2), nullptr, cfg);
  const NsRun second = picard_solve(first.states.back(), nullptr, cfg);
  CHECK(sup_gap(whole.states.back(), second.states.back()) < 1e-7);
}

TEST_CASE("incompatible initial data are rejected") {
  const TensorGrid g = strip(8, YGrid::graded(65, 30.0, 1.05));
  SampledField u0 = zero_field(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < 8; ++i) u0.u[0][j * 8 + i] = std::cos(g.x(0, i)) * std::exp(-g.y->nodes()[j]);
  }
  NsConfig cfg;
  CHECK_THROWS_AS(picard_solve(u0, nullptr, cfg), IncompatibleDataError);
  cfg.dt = 0.0;
  CHECK_THROWS_AS(picard_solve(zero_field(g), nullptr, cfg), DomainError);
}

}
