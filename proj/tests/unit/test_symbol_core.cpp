#include <doctest.h>

#include <cmath>

#include "hstokes/errors.hpp"
#include "hstokes/symbol_core.hpp"

using namespace hstokes;

namespace {

ModeParams unit_mode() { return derive_mode({1.0, 1.0, 1.0}, 0.0, {1.0}); }

bool close(cplx a, cplx b, double tol = 1e-13) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

}  // namespace

TEST_SUITE("symbol_core") {

TEST_CASE("mode quantities") {
  const ModeParams m = unit_mode();
  CHECK(close(m.omega, std::sqrt(2.0)));
  CHECK(close(m.lambda_eps, 1.0));
  CHECK(m.xi_norm == doctest::Approx(1.0));
  CHECK(close(m.velocity_rate(), std::sqrt(2.0)));

  const ModeParams c = derive_mode({1.0, 1.0, 1.0}, cplx(0.0, 2.0), {std::sqrt(3.0)});
  CHECK(close(c.omega, std::sqrt(cplx(4.0, 2.0))));
  CHECK(c.omega.real() > 0.0);

  const ModeParams s = derive_mode({2.0, 4.0, 0.5}, cplx(0.0, 1.0), {0.3, -0.4});
  CHECK(s.zeta_norm == doctest::Approx(1.0));
  CHECK(s.kappa == doctest::Approx(4.0));
}

TEST_CASE("invalid constants are rejected") {
  CHECK_THROWS_AS(derive_mode({0.0, 1.0, 1.0}, 0.0, {1.0}), DomainError);
  CHECK_THROWS_AS(derive_mode({1.0, -1.0, 1.0}, 0.0, {1.0}), DomainError);
  CHECK_THROWS_AS(derive_mode({1.0, 1.0, 0.0}, 0.0, {1.0}), DomainError);
  CHECK_THROWS_AS(derive_mode({1.0, 1.0, 1.0}, cplx(-0.5, 0.0), {1.0}), DomainError);
  CHECK_THROWS_AS(derive_mode({1.0, 1.0, 1.0}, 0.0, {}), DomainError);
  CHECK_THROWS_AS(BcSpec(2, 0), DomainError);
}

TEST_CASE("ansatz matrix") {
  const AnsatzMatrix a = ansatz_matrix(unit_mode(), 2);
  REQUIRE(a.entries.rows() == 3);
  REQUIRE(a.entries.cols() == 2);
  CHECK(close(a.entries(0, 0), std::sqrt(2.0)));
  CHECK(close(a.entries(0, 1), cplx(0.0, -1.0)));
  CHECK(close(a.entries(1, 0), cplx(0.0, 1.0)));
  CHECK(close(a.entries(1, 1), 1.0));
  CHECK(close(a.entries(2, 0), 0.0));
  CHECK(close(a.entries(2, 1), 1.0));
}

TEST_CASE("boundary symbol, no-slip with stress-free normal") {
  const CMatrix s = boundary_symbol(unit_mode(), BcSpec(0, 1));
  CHECK(close(s(0, 0), std::sqrt(2.0)));
  CHECK(close(s(0, 1), cplx(0.0, -1.0)));
  CHECK(close(s(1, 0), cplx(0.0, 2.0 * std::sqrt(2.0))));
  CHECK(close(s(1, 1), 3.0));
}

TEST_CASE("symbol solves with frozen values") {
  const ModeParams m = unit_mode();
  const CVector z00 = solve_symbol(m, BcSpec(0, 0), 1.0);
  CHECK(close(z00(1), 1.0 / (1.0 - 1.0 / std::sqrt(2.0))));
  const CVector zm1 = solve_symbol(m, BcSpec(-1, 1), 1.0);
  CHECK(close(zm1(1), 1.0 / 3.0));
  CHECK(close(trace_multiplier(m, BcSpec(-1, 1)), 1.0 / 3.0));
  CHECK(close(trace_multiplier(m, BcSpec(0, 0)), 2.0 + std::sqrt(2.0)));
  CHECK(close(trace_multiplier(m, BcSpec(-1, 0)), 1.0));
  CHECK(close(trace_multiplier(m, BcSpec(1, 0)), 3.0));
}

TEST_CASE("closed-form inverses agree with generic LU") {
  const std::vector<ModeParams> modes = {
      unit_mode(),
      derive_mode({0.7, 2.3, 0.01}, cplx(0.0, 37.0), {0.02, -0.5}),
      derive_mode({3.0, 0.2, 100.0}, cplx(0.0, 3.0), {80.0}),
      derive_mode({1.0, 1.0, 1e-2}, cplx(0.0, 0.0), {0.01, 0.01, 0.02}),
  };
  for (const auto& m : modes) {
    for (const auto& bc : BcSpec::all()) {
      if (bc.beta == -1) continue;
      const CMatrix sym = boundary_symbol(m, bc);
      const SymbolInverse inv = closed_form_inverse(m, bc);
      const CMatrix gen = generic_inverse(sym);
      const double rel = norm_inf(inv.inverse - gen) / norm_inf(gen);
      CAPTURE(bc.name());
      CHECK(rel < 1e-10);
      const CMatrix id = CMatrix::Identity(sym.rows(), sym.cols());
      CHECK(norm_inf(sym * inv.inverse - id) / (norm_inf(sym) * norm_inf(inv.inverse)) < 1e-14);
    }
  }
}

TEST_CASE("symbol factorization reproduces the symbol") {
  const ModeParams m = derive_mode({1.3, 0.4, 0.5}, cplx(0.0, 5.0), {0.3, 1.1});
  for (const auto& bc : BcSpec::all()) {
    if (bc.beta == -1) continue;
    const SymbolFactors f = boundary_symbol_factors(m, bc);
    const CMatrix rebuilt = f.prefactor.asDiagonal() * f.reduced;
    const CMatrix sym = boundary_symbol(m, bc);
    CAPTURE(bc.name());
    CHECK(norm_inf(rebuilt - sym) <= 1e-13 * norm_inf(sym));
  }
}

TEST_CASE("unsupported and singular cases") {
  CHECK_THROWS_AS(closed_form_inverse(unit_mode(), BcSpec(-1, -1)), UnsupportedCaseError);
  const ModeParams zero = derive_mode({1.0, 1.0, 1.0}, 0.0, {0.0});
  CHECK_THROWS_AS(closed_form_inverse(zero, BcSpec(0, 0)), SingularModeError);
}

TEST_CASE("classification") {
  CHECK(BcSpec(0, 0).bc_class() == BcClass::B1);
  CHECK(BcSpec(1, 0).bc_class() == BcClass::B1);
  CHECK(BcSpec(-1, 0).bc_class() == BcClass::B1);
  CHECK(BcSpec(0, 1).bc_class() == BcClass::B2);
  CHECK(BcSpec(1, 1).bc_class() == BcClass::B2);
  CHECK(BcSpec(0, -1).bc_class() == BcClass::B2);
  CHECK(BcSpec(-1, -1).bc_class() == BcClass::B2);
  CHECK(BcSpec(1, -1).bc_class() == BcClass::B3);
  CHECK(BcSpec(-1, 1).bc_class() == BcClass::B3);
  CHECK(BcSpec::all().size() == 9);
  CHECK(BcSpec(1, -1).name() == "(+1,-1)");
}

}
