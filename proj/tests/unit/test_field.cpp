#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hstokes/errors.hpp"
#include "hstokes/field.hpp"
#include "hstokes/sampling.hpp"

using namespace hstokes;

namespace {

TensorGrid strip(int nx, YGridPtr y) {
  TensorGrid g;
  g.n = 2;
  g.nx = {nx};
  g.y = std::move(y);
  return g;
}

// Normal velocity e^{-y}, nothing else, on mode xi.
ModeProfile normal_bump(double xi) {
  ModeProfile p = ModeProfile::zero(derive_mode({1.0, 1.0, 1.0}, 0.0, {xi}));
  p.velocity.normal = ScalarModeProfile::exponential(1.0, 1.0);
  return p;
}

std::vector<FieldTerm> eight_mode_terms(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FieldTerm> terms;
  for (int m = 1; m <= 4; ++m) {
    const ModeProfile p = solve_mode(derive_mode({1.0, 1.0, 1.0}, 0.0, {double(m)}), BcSpec(1, 1), rng.unit_box_complex());
    terms.push_back({p, 1.0});
    terms.push_back({p.conj(), 1.0});
  }
  return terms;
}

}  // namespace

TEST_SUITE("field") {

TEST_CASE("empty term list gives the zero field") {
  const SampledField f = synthesize_field({}, strip(8, YGrid::graded(17, 20.0, 1.1)));
  for (const auto& c : f.u) {
    for (double v : c) CHECK(v == 0.0);
  }
  for (double v : f.p) CHECK(v == 0.0);
}

TEST_CASE("one conjugate pair is a cosine wave") {
  const TensorGrid g = strip(8, YGrid::graded(17, 20.0, 1.1));
  const ModeProfile p = normal_bump(1.0);
  const SampledField f = synthesize_field({{p, 0.5}, {p.conj(), 0.5}}, g);
  double gap = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < 8; ++i) {
      const double want = std::cos(g.x(0, i)) * std::exp(-g.y->nodes()[j]);
      gap = std::max(gap, std::abs(f.u[1][j * 8 + i] - want));
      CHECK(f.u[0][j * 8 + i] == 0.0);
    }
  }
  CHECK(gap < 1e-15);
}

TEST_CASE("synthesis rejects unresolved or complex mode sets") {
  const TensorGrid g = strip(8, YGrid::graded(17, 20.0, 1.1));
  const ModeProfile off = normal_bump(0.5);
  CHECK_THROWS_AS(synthesize_field({{off, 1.0}, {off.conj(), 1.0}}, g), DomainError);
  const ModeProfile nyq = normal_bump(4.0);
  CHECK_THROWS_AS(synthesize_field({{nyq, 1.0}, {nyq.conj(), 1.0}}, g), DomainError);
  const ModeProfile one = normal_bump(1.0);
  CHECK_THROWS_AS(synthesize_field({{one, 1.0}}, g), IncompatibleDataError);
  CHECK_THROWS_AS(synthesize_field({{one, 1.0}, {one.conj(), 2.0}}, g), IncompatibleDataError);
  const TensorGrid shallow = strip(8, YGrid::graded(17, 10.0, 1.1));
  CHECK_THROWS_AS(synthesize_field({{one, 1.0}, {one.conj(), 1.0}}, shallow), DomainError);
}

TEST_CASE("spectral x-derivative of a resolved wave") {
  const TensorGrid g = strip(16, YGrid::uniform(9, 1.0));
  std::vector<double> f(g.size()), want(g.size());
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < 16; ++i) {
      f[j * 16 + i] = std::sin(3.0 * g.x(0, i)) * (1.0 + j);
      want[j * 16 + i] = -9.0 * std::sin(3.0 * g.x(0, i)) * (1.0 + j);
    }
  }
  const std::vector<double> d2 = derivative_x(g, f, 0, 2);
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(std::abs(d2[k] - want[k]) < 1e-12);
}

TEST_CASE("eight-mode Stokes synthesis solves the equations on the grid") {
  const TensorGrid g = strip(16, YGrid::graded(257, 25.0, 1.025));
  const SampledField f = synthesize_field(eight_mode_terms(7), g);
  const std::vector<double> div = divergence(f);
  CHECK(max_abs_planes(g, div, 0, g.ny()) < 1e-6);
  const auto res = stokes_residual(f, {1.0, 1.0, 1.0}, 0.0);
  for (const auto& r : res) CHECK(max_abs_planes(g, r, 0, g.ny()) < 1e-6);
}

TEST_CASE("serial and parallel synthesis agree bitwise") {
  const TensorGrid g = strip(16, YGrid::graded(65, 25.0, 1.05));
  const auto terms = eight_mode_terms(11);
  const SampledField a = synthesize_field(terms, g, 0.0, Execution::serial);
  const SampledField b = synthesize_field(terms, g, 0.0, Execution::parallel);
  CHECK(a.u == b.u);
  CHECK(a.p == b.p);
}

TEST_CASE("csv layout") {
  const TensorGrid g = strip(4, YGrid::uniform(7, 3.0));
  SampledField f = zero_field(g);
  f.p[5] = 0.1;
  std::ostringstream os;
  write_field_csv(f, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "x0,y,u0,u1,p");
  int rows = 0;
  std::string row5;
  while (std::getline(is, line)) {
    if (rows == 5) row5 = line;
    ++rows;
  }
  CHECK(rows == 28);
  CHECK(row5 == "1.5707963267948966,0.5,0,0,0.10000000000000001");
}

}
