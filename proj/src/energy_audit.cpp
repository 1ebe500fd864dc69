// SPDX-License-Identifier: Apache-2.0
#include "hstokes/energy_audit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hstokes/errors.hpp"
#include "hstokes/report.hpp"
#include "hstokes/sampling.hpp"

namespace hstokes {

namespace {

double cell_area(const TensorGrid& g) {
  double a = 1.0;
  for (int m : g.nx) a *= 2.0 * std::numbers::pi * g.period_scale / m;
  return a;
}

void require_same_grid(const SampledField& a, const SampledField& b, const char* ctx) {
  if (a.grid.n != b.grid.n || a.grid.nx != b.grid.nx || a.grid.period_scale != b.grid.period_scale ||
      !a.grid.y->same_nodes(*b.grid.y)) {
    throw DomainError(std::string(ctx) + ": fields live on different grids");
  }
}

}  // namespace

TensorField gradient_tensor(const SampledField& field) {
  const TensorGrid& g = field.grid;
  g.validate();
  TensorField J(g.n, g.size());
  for (int i = 0; i < g.n; ++i) {
    for (int d = 0; d < g.n - 1; ++d) J.at(i, d) = derivative_x(g, field.u[i], d);
    J.at(i, g.n - 1) = derivative_y(g, field.u[i]);
  }
  return J;
}

TensorSet tensors_from_gradient(const SampledField& field, const TensorField& J, const FluidConstants& c) {
  const int n = field.grid.n;
  if (J.n != n) throw DomainError("tensors_from_gradient: gradient dimension differs from the field");
  const std::size_t size = field.grid.size();
  TensorSet t;
  t.gradient = J;
  t.D = TensorField(n, size);
  t.R = TensorField(n, size);
  t.S = TensorField(n, size);
  t.T = TensorField(n, size);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto& a = J.at(i, j);
      const auto& b = J.at(j, i);
      auto& D = t.D.at(i, j);
      auto& R = t.R.at(i, j);
      auto& S = t.S.at(i, j);
      auto& T = t.T.at(i, j);
      for (std::size_t k = 0; k < size; ++k) {
        D[k] = 0.5 * (a[k] + b[k]);
        R[k] = 0.5 * (a[k] - b[k]);
        const double pk = i == j ? field.p[k] : 0.0;
        S[k] = 2.0 * c.mu * D[k] - pk;
        T[k] = 2.0 * c.mu * R[k] - pk;
      }
    }
  }
  return t;
}

TensorSet tensors(const SampledField& field, const FluidConstants& c) {
  TensorSet t = tensors_from_gradient(field, gradient_tensor(field), c);
  const TensorGrid& g = field.grid;
  const YGrid& yg = *g.y;
  const std::size_t plane = g.plane_size();
  for (int i = 0; i < g.n; ++i) {
    const auto& dy = t.gradient.at(i, g.n - 1);
    double scale = 0.0, gap = 0.0;
    for (int j = 0; j < yg.size(); ++j) {
      const Stencil& s = yg.d1_low(j);
      for (std::size_t q = 0; q < plane; ++q) {
        double low = 0.0;
        for (std::size_t w = 0; w < s.weights.size(); ++w) {
          low += s.weights[w] * field.u[i][static_cast<std::size_t>(s.start) * plane + w * plane + q];
        }
        const double hi = dy[j * plane + q];
        scale = std::max(scale, std::abs(hi));
        gap = std::max(gap, std::abs(hi - low));
      }
    }
    if (scale > 0.0 && gap > 1e-2 * scale) {
      t.warnings.push_back("under-resolved y grid: d/dy u" + std::to_string(i) + " differs from its second-order estimate by " +
                           format_double(gap / scale) + " (relative)");
    }
  }
  return t;
}

double volume_integral(const TensorGrid& g, const std::vector<double>& v) {
  const std::size_t plane = g.plane_size();
  const auto& w = g.y->integration_weights();
  double acc = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < plane; ++i) s += v[j * plane + i];
    acc += w[j] * s;
  }
  return acc * cell_area(g);
}

BoundaryPowers boundary_powers(const SampledField& field, const TensorSet& t, const FluidConstants& c) {
  const TensorGrid& g = field.grid;
  const int n = g.n;
  const int y = n - 1;
  const std::size_t plane = g.plane_size();
  BoundaryPowers out;
  const double dA = cell_area(g);
  out.area = dA * static_cast<double>(plane);
  double ps = 0.0, pt = 0.0, conv = 0.0;
  for (std::size_t k = 0; k < plane; ++k) {
    // nu = -e_y: (S nu)_i = -S_{i y}, u . nu = -u_y.
    double us = 0.0, ut = 0.0, uu = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ui = field.u[i][k];
      us -= ui * t.S.at(i, y)[k];
      ut -= ui * t.T.at(i, y)[k];
      uu += ui * ui;
      out.sup_u = std::max(out.sup_u, std::abs(ui));
      for (int j = 0; j < n; ++j) {
        out.sup_S = std::max(out.sup_S, std::abs(t.S.at(i, j)[k]));
        out.sup_T = std::max(out.sup_T, std::abs(t.T.at(i, j)[k]));
      }
    }
    ps += us;
    pt += ut;
    conv += 0.5 * c.rho * uu * (-field.u[y][k]);
  }
  out.power_s = ps * dA;
  out.power_s_alt = pt * dA;
  out.power_ns = (ps - conv) * dA;
  out.power_ns_alt = (pt - conv) * dA;
  return out;
}

double power_s(const SampledField& f, const TensorSet& t, const FluidConstants& c) { return boundary_powers(f, t, c).power_s; }
double power_ns(const SampledField& f, const TensorSet& t, const FluidConstants& c) { return boundary_powers(f, t, c).power_ns; }
double power_s_alt(const SampledField& f, const TensorSet& t, const FluidConstants& c) {
  return boundary_powers(f, t, c).power_s_alt;
}
double power_ns_alt(const SampledField& f, const TensorSet& t, const FluidConstants& c) {
  return boundary_powers(f, t, c).power_ns_alt;
}

double stress_split_gap(const SampledField& field, const TensorSet& t) {
  const TensorGrid& g = field.grid;
  const int n = g.n;
  const int y = n - 1;
  double gap = 0.0;
  for (std::size_t k = 0; k < g.plane_size(); ++k) {
    double direct = 0.0, tangential = 0.0;
    for (int i = 0; i < n; ++i) direct -= field.u[i][k] * t.S.at(i, y)[k];
    for (int i = 0; i < y; ++i) tangential -= field.u[i][k] * t.S.at(i, y)[k];
    // (u . nu)(S nu . nu) with nu = -e_y.
    const double normal = (-field.u[y][k]) * t.S.at(y, y)[k];
    gap = std::max(gap, std::abs(direct - (normal + tangential)));
  }
  return gap;
}

double gradient_transpose_boundary_term(const SampledField& field, const TensorSet& t) {
  const TensorGrid& g = field.grid;
  const int y = g.n - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < g.plane_size(); ++k) {
    for (int i = 0; i < g.n; ++i) acc -= field.u[i][k] * t.gradient.at(y, i)[k];
  }
  return acc * cell_area(g);
}

EnergySnapshot energy_snapshot(const SampledField& field, const TensorSet& t, const FluidConstants& c,
                               const SampledField* force) {
  c.validate();
  const TensorGrid& g = field.grid;
  const int n = g.n;
  double sup = 0.0;
  for (int i = 0; i < n; ++i) sup = std::max(sup, max_abs_planes(g, field.u[i], g.ny() - 1, g.ny()));
  if (sup >= 1e-8) {
    throw DomainError("energy audit refused: the y = Y face carries |u| = " + format_double(sup) +
                      " (needs < 1e-8 for halfspace semantics)");
  }
  if (force) require_same_grid(field, *force, "energy_snapshot");
  const std::size_t size = g.size();
  std::vector<double> ke(size, 0.0), dd(size, 0.0), rr(size, 0.0), fu(size, 0.0);
  for (std::size_t k = 0; k < size; ++k) {
    for (int i = 0; i < n; ++i) {
      ke[k] += field.u[i][k] * field.u[i][k];
      if (force) fu[k] += force->u[i][k] * field.u[i][k];
      for (int j = 0; j < n; ++j) {
        dd[k] += t.D.at(i, j)[k] * t.D.at(i, j)[k];
        rr[k] += t.R.at(i, j)[k] * t.R.at(i, j)[k];
      }
    }
  }
  EnergySnapshot s;
  s.time = field.time;
  s.kinetic = 0.5 * c.rho * volume_integral(g, ke);
  s.dissipation_D = 2.0 * c.mu * volume_integral(g, dd);
  s.dissipation_R = 2.0 * c.mu * volume_integral(g, rr);
  s.forcing_power = force ? c.rho * volume_integral(g, fu) : 0.0;
  s.powers = boundary_powers(field, t, c);
  return s;
}

EnergyReport energy_balance_residual(const std::vector<SampledField>& series, double dt, const FluidConstants& c,
                                     EnergyModel model, const std::vector<SampledField>& forces) {
  if (series.size() < 3) throw DomainError("energy_balance_residual: needs at least 3 snapshots");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("energy_balance_residual: dt must be positive");
  if (!forces.empty() && forces.size() != series.size()) {
    throw DomainError("energy_balance_residual: forces must align with the snapshots");
  }
  EnergyReport r;
  r.model = model;
  r.dt = dt;
  for (std::size_t k = 0; k < series.size(); ++k) {
    require_same_grid(series[0], series[k], "energy_balance_residual");
    const TensorSet t = tensors(series[k], c);
    for (const auto& w : t.warnings) {
      if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) r.warnings.push_back(w);
    }
    r.snapshots.push_back(energy_snapshot(series[k], t, c, forces.empty() ? nullptr : &forces[k]));
  }
  for (std::size_t k = 1; k + 1 < r.snapshots.size(); ++k) {
    const EnergySnapshot& s = r.snapshots[k];
    const double dE = (r.snapshots[k + 1].kinetic - r.snapshots[k - 1].kinetic) / (2.0 * dt);
    const bool ns = model == EnergyModel::navier_stokes;
    const double pD = ns ? s.powers.power_ns : s.powers.power_s;
    const double pR = ns ? s.powers.power_ns_alt : s.powers.power_s_alt;
    r.residual_D.push_back(dE + s.dissipation_D - pD - s.forcing_power);
    r.residual_R.push_back(dE + s.dissipation_R - pR - s.forcing_power);
    r.max_residual_D = std::max(r.max_residual_D, std::abs(r.residual_D.back()));
    r.max_residual_R = std::max(r.max_residual_R, std::abs(r.residual_R.back()));
  }
  return r;
}

void BalanceStudyCfg::validate() const {
  constants.validate();
  if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("balance study: xi must be positive");
  if (nx < 4 || nx % 2 != 0) throw DomainError("balance study: nx must be even and at least 4");
  if (points < 7 || !(length > 0.0) || !(stretch >= 1.0)) throw DomainError("balance study: invalid y grid");
  if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t0)) throw DomainError("balance study: invalid time sampling");
  if (levels < 1) throw DomainError("balance study: levels must be at least 1");
}

BalanceStudy energy_balance_study(const BalanceStudyCfg& cfg) {
  cfg.validate();
  const ModeParams m = derive_mode(cfg.constants, cfg.lambda, {cfg.xi});
  const ModeProfile p = solve_mode(m, cfg.bc, cfg.h_w);
  TensorGrid g;
  g.n = 2;
  g.period_scale = 1.0 / cfg.xi;
  g.nx = {cfg.nx};
  g.y = YGrid::graded(cfg.points, cfg.length, cfg.stretch);
  double dt = cfg.dt;
  BalanceStudy out;
  for (int level = 0; level < cfg.levels; ++level) {
    std::vector<SampledField> series;
    for (int k = -1; k <= 1; ++k) {
      const double t = cfg.t0 + k * dt;
      const cplx e = std::exp(m.lambda_eps * t);
      series.push_back(synthesize_field({{p, e}, {p.conj(), std::conj(e)}}, g, t));
    }
    out.levels.push_back({g.ny(), dt, energy_balance_residual(series, dt, cfg.constants, EnergyModel::stokes)});
    if (level > 0) {
      const EnergyReport& a = out.levels[level - 1].report;
      const EnergyReport& b = out.levels[level].report;
      out.order_D.push_back(std::log2(a.max_residual_D / b.max_residual_D));
      out.order_R.push_back(std::log2(a.max_residual_R / b.max_residual_R));
    }
    dt /= 2.0;
    g.y = g.y->refined();
  }
  return out;
}

namespace {

struct Trial {
  SampledField field;
  TensorField gradient;
  double boundary_defect = 0.0;
};

constexpr int kVelocityTerms = 3;
constexpr int kPressureTerms = 2;

// Two-dimensional trial field from a stream function psi = sum_m phi_m(y) e^{i m x} (plus conjugates),
// u = (psi_y, -psi_x), pressure sum_m P_m(y) e^{i m x}. Each mode's coefficients are projected onto the
// null space of the two homogeneous boundary rows, so the constraints hold to rounding.
Trial make_trial(const BcSpec& bc, const ClassificationCfg& cfg, const TensorGrid& grid, Rng& rng) {
  const double mu = cfg.constants.mu;
  std::vector<double> r(kVelocityTerms), q(kPressureTerms);
  for (double& v : r) v = rng.uniform(0.5, 3.0);
  for (double& v : q) v = rng.uniform(0.5, 3.0);
  const int unknowns = kVelocityTerms + kPressureTerms;

  std::vector<CVector> coeff(static_cast<std::size_t>(cfg.modes));
  for (int m = 0; m < cfg.modes; ++m) {
    CVector z(unknowns);
    for (int i = 0; i < unknowns; ++i) z(i) = m == 0 ? cplx(rng.uniform(-1.0, 1.0)) : rng.unit_box_complex();
    CMatrix A = CMatrix::Zero(2, unknowns);
    const cplx im = kI * static_cast<double>(m);
    for (int j = 0; j < kVelocityTerms; ++j) {
      A(0, j) = bc.alpha == 0 ? cplx(-r[j]) : cplx(-bc.alpha * mu * r[j] * r[j] - mu * m * m);
      if (bc.beta == 0) A(1, j) = -im;
      if (bc.beta == 1) A(1, j) = -2.0 * mu * im * r[j];
    }
    for (int k = 0; k < kPressureTerms; ++k) {
      if (bc.beta != 0) A(1, kVelocityTerms + k) = 1.0;
    }
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(A);
    z -= cod.pseudoInverse() * (A * z);
    if (m == 0) z = z.real().cast<cplx>();
    coeff[static_cast<std::size_t>(m)] = z;
  }

  Trial t;
  t.field = zero_field(grid);
  t.gradient = TensorField(2, grid.size());
  const std::size_t plane = grid.plane_size();
  const auto& ys = grid.y->nodes();
  for (int j = 0; j < grid.ny(); ++j) {
    const double y = ys[j];
    std::vector<cplx> phi(cfg.modes), dphi(cfg.modes), ddphi(cfg.modes), P(cfg.modes);
    for (int m = 0; m < cfg.modes; ++m) {
      const CVector& z = coeff[static_cast<std::size_t>(m)];
      for (int k = 0; k < kVelocityTerms; ++k) {
        const cplx e = z(k) * std::exp(-r[k] * y);
        phi[m] += e;
        dphi[m] -= r[k] * e;
        ddphi[m] += r[k] * r[k] * e;
      }
      for (int k = 0; k < kPressureTerms; ++k) P[m] += z(kVelocityTerms + k) * std::exp(-q[k] * y);
    }
    for (std::size_t i = 0; i < plane; ++i) {
      const double x = grid.x(0, static_cast<int>(i));
      double u0 = 0, u1 = 0, p = 0, j00 = 0, j01 = 0, j10 = 0, j11 = 0;
      for (int m = 0; m < cfg.modes; ++m) {
        const double w = m == 0 ? 1.0 : 2.0;  // mode plus its conjugate
        const cplx e = std::exp(kI * (m * x));
        const cplx im = kI * static_cast<double>(m);
        u0 += w * (dphi[m] * e).real();
        u1 += w * (-im * phi[m] * e).real();
        p += w * (P[m] * e).real();
        j00 += w * (im * dphi[m] * e).real();
        j01 += w * (ddphi[m] * e).real();
        j10 += w * (-im * im * phi[m] * e).real();
        j11 += w * (-im * dphi[m] * e).real();
      }
      const std::size_t k = j * plane + i;
      t.field.u[0][k] = u0;
      t.field.u[1][k] = u1;
      t.field.p[k] = p;
      t.gradient.at(0, 0)[k] = j00;
      t.gradient.at(0, 1)[k] = j01;
      t.gradient.at(1, 0)[k] = j10;
      t.gradient.at(1, 1)[k] = j11;
    }
  }

  double sup = 0.0;
  for (const auto& comp : t.field.u) {
    for (double v : comp) sup = std::max(sup, std::abs(v));
  }
  if (!(sup > 0.0)) throw std::runtime_error("classify_bc: trial generator produced a zero field");
  for (auto& comp : t.field.u) {
    for (double& v : comp) v /= sup;
  }
  for (double& v : t.field.p) v /= sup;
  for (auto& comp : t.gradient.c) {
    for (double& v : comp) v /= sup;
  }

  // Constraint residual on y = 0, relative to the sizes of the quantities involved.
  double defect = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < plane; ++i) {
    const double tang = bc.alpha == 0 ? t.field.u[0][i]
                                      : -bc.alpha * mu * t.gradient.at(0, 1)[i] - mu * t.gradient.at(1, 0)[i];
    const double norm = bc.beta == 0   ? t.field.u[1][i]
                        : bc.beta == 1 ? -2.0 * mu * t.gradient.at(1, 1)[i] + t.field.p[i]
                                       : t.field.p[i];
    defect = std::max({defect, std::abs(tang), std::abs(norm)});
    scale = std::max({scale, std::abs(t.field.p[i]), mu * std::abs(t.gradient.at(0, 1)[i]),
                      mu * std::abs(t.gradient.at(1, 0)[i]), mu * std::abs(t.gradient.at(1, 1)[i])});
  }
  t.boundary_defect = defect / scale;
  if (t.boundary_defect > 1e-10) {
    throw std::runtime_error("classify_bc: trial field misses the boundary constraints by " +
                             format_double(t.boundary_defect));
  }
  return t;
}

}  // namespace

ClassificationVerdict classify_bc(const BcSpec& bc, const ClassificationCfg& cfg) {
  cfg.constants.validate();
  if (cfg.trials < 1 || cfg.modes < 1 || cfg.nx < 2 * cfg.modes + 2 || cfg.nx % 2 != 0) {
    throw DomainError("classify_bc: need trials >= 1, modes >= 1 and an even nx above twice the mode count");
  }
  TensorGrid grid;
  grid.n = 2;
  grid.period_scale = 1.0;
  grid.nx = {cfg.nx};
  grid.y = YGrid::graded(65, 60.0, 1.05);

  ClassificationVerdict v;
  v.bc = bc;
  v.static_class = bc.bc_class();
  v.trials = cfg.trials;
  Rng rng(cfg.seed);
  double max_s = 0.0, max_t = 0.0;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const Trial t = make_trial(bc, cfg, grid, rng);
    const TensorSet ts = tensors_from_gradient(t.field, t.gradient, cfg.constants);
    const BoundaryPowers bp = boundary_powers(t.field, ts, cfg.constants);
    double sup_S = 0.0;
    for (const auto& comp : ts.S.c) {
      for (double x : comp) sup_S = std::max(sup_S, std::abs(x));
    }
    // Trial fields are normalized to sup |u| = 1 over the domain.
    const double scale = field_scale(1.0, sup_S, bp.area, cfg.constants.rho);
    const double ns = std::max(std::abs(bp.power_ns), std::abs(bp.power_ns_alt));
    v.max_rel_power_ns = std::max(v.max_rel_power_ns, ns / scale);
    max_s = std::max(max_s, std::abs(bp.power_s));
    max_t = std::max(max_t, std::abs(bp.power_s_alt));
    v.max_boundary_defect = std::max(v.max_boundary_defect, t.boundary_defect);
    if (v.witness_trial < 0 && std::abs(bp.power_s) > cfg.witness_tol && std::abs(bp.power_s_alt) > cfg.witness_tol) {
      v.witness_trial = trial;
      v.witness_power_s = bp.power_s;
      v.witness_power_s_alt = bp.power_s_alt;
    }
  }
  v.max_power_s_preserved = std::min(max_s, max_t);
  if (v.max_rel_power_ns < cfg.vanish_tol) {
    v.empirical_class = BcClass::B1;
  } else if (v.max_power_s_preserved < cfg.vanish_tol) {
    v.empirical_class = BcClass::B2;
  } else {
    v.empirical_class = BcClass::B3;
  }
  v.matches = v.empirical_class == v.static_class && (v.static_class != BcClass::B3 || v.witness_trial >= 0);
  return v;
}

bool CompatibilityReport::passed() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const CompatibilityCondition& c) { return c.passed; });
}

CompatibilityReport check_compatibility(const SampledField& u0, const std::vector<double>& g,
                                        const std::vector<std::vector<double>>& h_t, const std::vector<double>& h_w,
                                        const BcSpec& bc, double p_exponent, const FluidConstants& c, double tol) {
  const TensorGrid& grid = u0.grid;
  grid.validate();
  const int n = grid.n;
  const std::size_t plane = grid.plane_size();
  if (!g.empty() && g.size() != grid.size()) throw DomainError("check_compatibility: g has the wrong size");
  if (!h_t.empty() && static_cast<int>(h_t.size()) != n - 1) throw DomainError("check_compatibility: h_t needs n - 1 components");
  for (const auto& h : h_t) {
    if (h.size() != plane) throw DomainError("check_compatibility: h_t must be sampled on the y = 0 plane");
  }
  if (!h_w.empty() && h_w.size() != plane) throw DomainError("check_compatibility: h_w must be sampled on the y = 0 plane");

  CompatibilityReport rep;
  {
    CompatibilityCondition c1{"C1", true, true, 0.0, "div u0 = g(0)"};
    const std::vector<double> div = divergence(u0);
    for (std::size_t k = 0; k < div.size(); ++k) c1.defect = std::max(c1.defect, std::abs(div[k] - (g.empty() ? 0.0 : g[k])));
    c1.passed = c1.defect <= tol;
    rep.conditions.push_back(c1);
  }
  {
    CompatibilityCondition c2{"C2", false, true, 0.0, ""};
    if (bc.alpha == 0) {
      c2.applicable = p_exponent > 1.5;
      c2.note = "tangential trace of u0 equals h_t(0); needs p > 3/2";
      for (int d = 0; d < n - 1; ++d) {
        for (std::size_t k = 0; k < plane; ++k) {
          c2.defect = std::max(c2.defect, std::abs(u0.u[d][k] - (h_t.empty() ? 0.0 : h_t[d][k])));
        }
      }
    } else {
      c2.applicable = p_exponent > 3.0;
      c2.note = "tangential stress operator of u0 equals h_t(0); needs p > 3";
      const TensorField J = gradient_tensor(u0);
      for (int d = 0; d < n - 1; ++d) {
        for (std::size_t k = 0; k < plane; ++k) {
          const double op = -bc.alpha * c.mu * J.at(d, n - 1)[k] - c.mu * J.at(n - 1, d)[k];
          c2.defect = std::max(c2.defect, std::abs(op - (h_t.empty() ? 0.0 : h_t[d][k])));
        }
      }
    }
    c2.passed = !c2.applicable || c2.defect <= tol;
    rep.conditions.push_back(c2);
  }
  {
    CompatibilityCondition c3{"C3", false, true, 0.0, ""};
    for (std::size_t k = 0; k < plane; ++k) {
      c3.defect = std::max(c3.defect, std::abs(u0.u[n - 1][k] - (h_w.empty() ? 0.0 : h_w[k])));
    }
    if (bc.beta == 0) {
      c3.applicable = p_exponent > 1.5;
      c3.note = "normal trace of u0 equals h_w(0); needs p > 3/2";
    } else {
      c3.note = "normal operator involves the pressure; no condition on u0";
    }
    c3.passed = !c3.applicable || c3.defect <= tol;
    rep.conditions.push_back(c3);
  }
  return rep;
}

}  // namespace hstokes
