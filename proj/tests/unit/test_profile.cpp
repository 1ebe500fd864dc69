#include <doctest.h>

#include <cmath>

#include "hstokes/profile.hpp"
#include "hstokes/quadrature.hpp"

using namespace hstokes;

namespace {

cplx brute_convolution(const ScalarModeProfile& f, cplx a, Parity parity, double y) {
  QuadratureCfg cfg;
  cfg.rel_tol = 1e-13;
  auto g = [&](double eta) {
    const double sg = parity == Parity::odd && eta > y ? -1.0 : 1.0;
    return sg * std::exp(-a * std::abs(y - eta)) * f.value(eta);
  };
  return integrate_adaptive(g, {0.0, y, 80.0}, cfg).value;
}

}  // namespace

TEST_SUITE("profile") {

TEST_CASE("fornberg weights are exact on polynomials") {
  const std::vector<double> x = {0.0, 0.3, 0.7, 1.2, 1.8};
  const auto w = fornberg_weights(0.5, x, 2);
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    d1 += w[1][j] * std::pow(x[j], 3);
    d2 += w[2][j] * std::pow(x[j], 3);
  }
  CHECK(d1 == doctest::Approx(3 * 0.25).epsilon(1e-12));
  CHECK(d2 == doctest::Approx(6 * 0.5).epsilon(1e-12));
}

TEST_CASE("graded grid refinement nests") {
  auto g = YGrid::graded(33, 20.0, 1.1);
  auto r = g->refined();
  REQUIRE(r->size() == 65);
  for (int i = 0; i < g->size(); ++i) CHECK(r->nodes()[2 * i] == doctest::Approx(g->nodes()[i]).epsilon(1e-14));
  CHECK(r->length() == doctest::Approx(20.0));
  auto quad_error = [](const YGrid& grid) {
    double sum = 0.0;
    for (int i = 0; i < grid.size(); ++i) sum += grid.integration_weights()[i] * std::exp(-grid.nodes()[i]);
    return std::abs(sum - (1.0 - std::exp(-20.0)));
  };
  const double e0 = quad_error(*g), e1 = quad_error(*r), e2 = quad_error(*r->refined());
  CHECK(e0 / e1 > 12.0);
  CHECK(e1 / e2 > 12.0);
}

TEST_CASE("closed-form convolution matches quadrature") {
  const ScalarModeProfile f = ScalarModeProfile::exponential(cplx(1.0, 0.5), cplx(0.8, 0.3)) +
                              ScalarModeProfile::exponential(2.0, 1.5, 2);
  const cplx a(1.2, -0.7);
  for (Parity p : {Parity::even, Parity::odd}) {
    const ScalarModeProfile c = half_line_convolution(f, a, p);
    for (double y : {0.0, 0.4, 1.7, 6.0}) {
      const cplx ref = brute_convolution(f, a, p, y);
      CHECK(std::abs(c.value(y) - ref) < 1e-11);
    }
  }
}

TEST_CASE("resonant rates produce polynomial factors") {
  const ScalarModeProfile f = ScalarModeProfile::exponential(1.0, 2.0);
  const ScalarModeProfile c = half_line_convolution(f, 2.0, Parity::even);
  for (double y : {0.0, 0.5, 3.0}) CHECK(std::abs(c.value(y) - brute_convolution(f, 2.0, Parity::even, y)) < 1e-12);
  CHECK(std::abs(laplace_moment(f, 2.0) - 0.25) < 1e-15);
}

TEST_CASE("convolution derivatives") {
  const ScalarModeProfile f = ScalarModeProfile::exponential(1.0, 0.9) + ScalarModeProfile::exponential(-0.5, 3.0, 1);
  for (Parity p : {Parity::even, Parity::odd}) {
    const ScalarModeProfile c = half_line_convolution(f, 1.4, p);
    const double y = 0.8, h = 1e-5;
    const cplx fd = (c.value(y + h) - c.value(y - h)) / (2 * h);
    CHECK(std::abs(c.derivative(y) - fd) < 1e-8);
  }
}

TEST_CASE("tabulated convolution approximates the closed form") {
  const ScalarModeProfile f = ScalarModeProfile::exponential(1.0, 1.0, 1);
  auto grid = YGrid::graded(257, 40.0, 1.02);
  const ScalarModeProfile t = ScalarModeProfile::tabulated(grid, f.sample(*grid), f.sample_derivative(*grid));
  for (Parity p : {Parity::even, Parity::odd}) {
    const ScalarModeProfile exact = half_line_convolution(f, cplx(1.3, 0.4), p);
    const ScalarModeProfile approx = half_line_convolution(t, cplx(1.3, 0.4), p);
    double err = 0.0;
    for (double y : grid->nodes()) err = std::max(err, std::abs(exact.value(y) - approx.value(y)));
    CHECK(err < 1e-9);
    CHECK(std::abs(exact.derivative(2.0) - approx.derivative(2.0)) < 1e-8);
  }
  CHECK(std::abs(laplace_moment(t, 0.7) - laplace_moment(f, 0.7)) < 1e-9);
}

TEST_CASE("cumulative integral of a table") {
  auto grid = YGrid::graded(129, 30.0, 1.03);
  const ScalarModeProfile f = ScalarModeProfile::exponential(1.0, 1.0);
  const ScalarModeProfile t = ScalarModeProfile::tabulated(grid, f.sample(*grid));
  const ScalarModeProfile c = cumulative_integral(t);
  for (double y : {0.5, 2.0, 10.0}) CHECK(std::abs(c.value(y) - (1.0 - std::exp(-y))) < 1e-7);
}

TEST_CASE("arithmetic merges equal terms") {
  ScalarModeProfile a = ScalarModeProfile::exponential(1.0, 2.0);
  a += ScalarModeProfile::exponential(2.0, 2.0);
  REQUIRE(a.terms().size() == 1);
  CHECK(a.terms()[0].amplitude == cplx(3.0));
  a -= ScalarModeProfile::exponential(3.0, 2.0);
  CHECK(a.is_zero());
  CHECK(std::abs(ScalarModeProfile::exponential(cplx(1, 1), cplx(2, 1)).conj().value(0.3) -
                 std::conj(std::exp(cplx(-0.6, -0.3)) * cplx(1, 1))) < 1e-15);
}

TEST_CASE("non-decaying inputs are rejected") {
  const ScalarModeProfile f = ScalarModeProfile::exponential(1.0, cplx(0.0, 1.0));
  CHECK_THROWS(half_line_convolution(f, 1.0, Parity::even));
  CHECK_THROWS(half_line_convolution(ScalarModeProfile::exponential(1.0, 1.0), cplx(0.0, 1.0), Parity::even));
}

}

TEST_SUITE("quadrature") {

TEST_CASE("adaptive Gauss-Kronrod on a peaked integrand") {
  QuadratureCfg cfg;
  auto r = integrate_adaptive([](double x) { return cplx(std::exp(-50.0 * std::abs(x - 0.3)), 0.0); }, {0.0, 1.0}, cfg);
  const double exact = (2.0 - std::exp(-15.0) - std::exp(-35.0)) / 50.0;
  CHECK(r.converged);
  CHECK(std::abs(r.value - exact) < 1e-12);
}

TEST_CASE("budget exhaustion is reported") {
  QuadratureCfg cfg;
  cfg.max_subdivisions = 3;
  cfg.rel_tol = 1e-14;
  auto r = integrate_adaptive([](double x) { return cplx(std::sqrt(x), 0.0); }, {0.0, 1.0}, cfg);
  CHECK_FALSE(r.converged);
}

TEST_CASE("Gauss-Legendre unit rules") {
  const UnitRule& r = gauss_legendre_unit(8);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 15);
  CHECK(s == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
}

}
