// SPDX-License-Identifier: Apache-2.0
#include "hstokes/parabolic_div.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "hstokes/errors.hpp"

namespace hstokes {

namespace {

cplx green_scale(const ModeParams& m) { return 1.0 / (2.0 * std::sqrt(m.constants.mu) * m.omega); }

void require_alpha(int alpha, const char* what) {
  if (alpha < -1 || alpha > 1) throw DomainError(std::string(what) + ": alpha must be -1, 0 or +1");
}

}  // namespace

cplx KernelSpec::reflection() const {
  const cplx w = mode.omega;
  const double z = mode.zeta_norm;
  switch (kind) {
    case KernelKind::G:
      return 0.0;
    case KernelKind::G_plus:
      return 1.0;
    case KernelKind::G_minus:
      return -1.0;
    case KernelKind::Kw_plus:
      return (w * w + 2.0 * w * z - z * z) / (w * w + z * z);
    case KernelKind::Kv_plus:
      return (w * w - 2.0 * w * z - z * z) / (w * w + z * z);
    case KernelKind::Kv_minus:
    case KernelKind::Kw_minus:
      // (omega + Z) / (omega - Z) with omega - Z = rho lambda_eps / (omega + Z).
      return (w + z) * (w + z) / mode.rho_lambda_eps;
  }
  return 0.0;
}

std::string KernelSpec::name() const {
  switch (kind) {
    case KernelKind::G: return "G";
    case KernelKind::G_plus: return "G_plus";
    case KernelKind::G_minus: return "G_minus";
    case KernelKind::Kv_plus: return "Kv_plus";
    case KernelKind::Kv_minus: return "Kv_minus";
    case KernelKind::Kw_plus: return "Kw_plus";
    case KernelKind::Kw_minus: return "Kw_minus";
  }
  return "?";
}

KernelSpec velocity_kernel(const ModeParams& mode, int alpha, bool normal) {
  require_alpha(alpha, "velocity_kernel");
  KernelSpec k;
  k.mode = mode;
  if (alpha == 0) k.kind = normal ? KernelKind::G_plus : KernelKind::G_minus;
  else if (alpha == 1) k.kind = normal ? KernelKind::Kw_plus : KernelKind::Kv_plus;
  else k.kind = normal ? KernelKind::Kw_minus : KernelKind::Kv_minus;
  return k;
}

cplx eval_kernel(const KernelSpec& spec, double y, double eta) {
  const cplx s = spec.mode.velocity_rate();
  const cplx direct = std::exp(-s * std::abs(y - eta));
  const cplx image = spec.kind == KernelKind::G ? cplx(0.0) : spec.reflection() * std::exp(-s * (y + eta));
  return green_scale(spec.mode) * (direct + image);
}

cplx eval_kernel_dy(const KernelSpec& spec, double y, double eta) {
  const cplx s = spec.mode.velocity_rate();
  const double sg = y < eta ? -1.0 : 1.0;
  const cplx direct = -sg * s * std::exp(-s * std::abs(y - eta));
  const cplx image = spec.kind == KernelKind::G ? cplx(0.0) : -s * spec.reflection() * std::exp(-s * (y + eta));
  return green_scale(spec.mode) * (direct + image);
}

ScalarModeProfile apply_kernel_closed_form(const KernelSpec& spec, const ScalarModeProfile& rhs) {
  const cplx s = spec.mode.velocity_rate();
  ScalarModeProfile out = half_line_convolution(rhs, s, Parity::even);
  const cplx theta = spec.reflection();
  if (theta != 0.0) out += ScalarModeProfile::exponential(theta * laplace_moment(rhs, s), s);
  return out * green_scale(spec.mode);
}

KernelApplication apply_kernel(const KernelSpec& spec, const ScalarModeProfile& rhs, const std::vector<double>& y_grid,
                               const QuadratureCfg& cfg, int y_derivative) {
  cfg.validate();
  rhs.require_decay("apply_kernel");
  if (y_derivative != 0 && y_derivative != 1) throw DomainError("apply_kernel: y_derivative must be 0 or 1");
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    if (!(y_grid[i] >= 0.0) || (i > 0 && y_grid[i] < y_grid[i - 1])) {
      throw DomainError("apply_kernel: y grid must be sorted and nonnegative");
    }
  }
  const double s_re = spec.mode.velocity_rate().real();
  const double slowest = std::min(s_re, rhs.slowest_rate());
  const double table_end = rhs.has_table() ? rhs.table()->grid->length() : 0.0;
  const double base = std::max(cfg.truncation_multiplier / slowest, table_end);

  KernelApplication out;
  out.y = y_grid;
  out.values.resize(y_grid.size());
  double l1_floor = 0.0;
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    const double y = y_grid[i];
    const double upper = std::max(base, y + cfg.truncation_multiplier / s_re);
    std::vector<double> breaks = {0.0};
    if (y > 0.0) breaks.push_back(y);
    if (table_end > 0.0 && table_end != y && table_end < upper) breaks.push_back(table_end);
    breaks.push_back(upper);
    std::sort(breaks.begin(), breaks.end());
    auto integrand = [&](double eta) {
      const cplx k = y_derivative == 0 ? eval_kernel(spec, y, eta) : eval_kernel_dy(spec, y, eta);
      return k * rhs.value(eta);
    };
    const QuadratureResult r = integrate_adaptive(integrand, breaks, cfg);
    if (!r.converged) {
      throw QuadratureBudgetError("apply_kernel(" + spec.name() + "): no convergence at y = " + format_double(y) +
                                  " within " + std::to_string(cfg.max_subdivisions) + " subdivisions");
    }
    out.values[i] = r.value;
    out.max_error_estimate = std::max(out.max_error_estimate, r.error_estimate);
    out.subdivisions += r.subdivisions;
    l1_floor = std::max(l1_floor, 1e-3 * r.l1_norm);
  }

  if (!rhs.has_table()) {
    const ScalarModeProfile exact = apply_kernel_closed_form(spec, rhs);
    double gap = 0.0, scale = l1_floor;
    out.closed_form.resize(y_grid.size());
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
      out.closed_form[i] = y_derivative == 0 ? exact.value(y_grid[i]) : exact.derivative(y_grid[i]);
      gap = std::max(gap, std::abs(out.values[i] - out.closed_form[i]));
      scale = std::max(scale, std::abs(out.closed_form[i]));
    }
    // An integrand that vanishes identically has L1 norm zero; the gap is then absolute.
    out.max_rel_gap = l1_floor > 0.0 ? gap / scale : gap;
  }
  return out;
}

VectorModeProfile parabolic_solve_mode(const ModeParams& mode, int alpha, const ScalarModeProfile& pressure,
                                       PressureKind /*kind: how the pressure was produced; not needed here*/) {
  require_alpha(alpha, "parabolic_solve_mode");
  if (mode.is_zero_mode()) throw ZeroModeError("parabolic_solve_mode: xi = 0");
  const double k = mode.xi_norm;
  if (pressure.has_table()) throw IncompatibleDataError("parabolic_solve_mode: pressure must be a closed-form harmonic mode");
  for (const ExpTerm& t : pressure.terms()) {
    if (t.power != 0 || std::abs(t.rate - cplx(k)) > 1e-14 * k) {
      throw IncompatibleDataError("parabolic_solve_mode: pressure must have the shape c exp(-|xi| y)");
    }
  }
  const int n = mode.dim();
  VectorModeProfile u(n);
  if (pressure.is_zero()) return u;
  const KernelSpec kv = velocity_kernel(mode, alpha, false);
  const KernelSpec kw = velocity_kernel(mode, alpha, true);
  for (int j = 0; j < n - 1; ++j) u.tangential[j] = -apply_kernel_closed_form(kv, pressure * cplx(0.0, mode.xi[j]));
  u.normal = -apply_kernel_closed_form(kw, pressure.derivative_profile());
  return u;
}

VectorModeProfile parabolic_resolvent_mode(const ModeParams& mode, int alpha, const VectorModeProfile& forcing,
                                           const std::vector<cplx>& tangential_datum, cplx divergence_datum) {
  require_alpha(alpha, "parabolic_resolvent_mode");
  const int n = mode.dim();
  const int t = n - 1;
  if (forcing.dim() != n || static_cast<int>(tangential_datum.size()) != t) {
    throw DomainError("parabolic_resolvent_mode: dimension mismatch");
  }
  const double mu = mode.constants.mu;
  const cplx s = mode.velocity_rate();
  const KernelSpec g{KernelKind::G, mode};
  const cplx c = green_scale(mode);

  // Particular part by the free-space kernel; its traces follow from the Laplace moments.
  VectorModeProfile u(n);
  std::vector<cplx> vp0(t), vp1(t);
  for (int j = 0; j < t; ++j) {
    u.tangential[j] = apply_kernel_closed_form(g, forcing.tangential[j]);
    const cplx m = laplace_moment(forcing.tangential[j], s);
    vp0[j] = c * m;
    vp1[j] = c * s * m;
  }
  u.normal = apply_kernel_closed_form(g, forcing.normal);
  const cplx mw = laplace_moment(forcing.normal, s);
  const cplx wp0 = c * mw;
  const cplx wp1 = c * s * mw;

  CVector coef(n);
  if (alpha == 0) {
    cplx div_tan = 0.0;
    for (int j = 0; j < t; ++j) {
      coef(j) = tangential_datum[j] - vp0[j];
      div_tan += kI * mode.xi[j] * tangential_datum[j];
    }
    coef(t) = (div_tan + wp1 - divergence_datum) / s;
  } else {
    const double a = alpha;
    CMatrix sys = CMatrix::Zero(n, n);
    CVector rhs(n);
    cplx row_t = divergence_datum - wp1;
    for (int j = 0; j < t; ++j) {
      sys(j, j) = a * mu * s;
      sys(j, t) = -mu * kI * mode.xi[j];
      sys(t, j) = kI * mode.xi[j];
      rhs(j) = tangential_datum[j] + a * mu * vp1[j] + mu * kI * mode.xi[j] * wp0;
      row_t -= kI * mode.xi[j] * vp0[j];
    }
    sys(t, t) = -s;
    rhs(t) = row_t;
    coef = sys.partialPivLu().solve(rhs);
  }
  for (int j = 0; j < t; ++j) u.tangential[j] += ScalarModeProfile::exponential(coef(j), s);
  u.normal += ScalarModeProfile::exponential(coef(t), s);
  return u;
}

FdSolution oracle_fd_solve(const ModeParams& mode, int alpha, const ScalarModeProfile& pressure, const YGridPtr& grid) {
  require_alpha(alpha, "oracle_fd_solve");
  if (mode.is_zero_mode()) throw ZeroModeError("oracle_fd_solve: xi = 0");
  if (!grid) throw DomainError("oracle_fd_solve: missing grid");
  const auto& y = grid->nodes();
  const int m = grid->size();
  for (double rate : {mode.velocity_rate().real(), mode.xi_norm}) {
    const double decay_length = 1.0 / rate;
    if (decay_length >= grid->length()) continue;
    const auto within = std::upper_bound(y.begin(), y.end(), decay_length) - y.begin();
    if (within < 8) {
      throw DomainError("oracle_fd_solve: grid has " + std::to_string(within) +
                        " points within the decay length " + format_double(decay_length) + " (need 8)");
    }
  }

  const double mu = mode.constants.mu;
  const double k = mode.xi_norm;
  const cplx w2 = mode.omega * mode.omega;
  const lapack_int n = 2 * m;
  const lapack_int kl = 2, ku = 4, ldab = 2 * kl + ku + 1;
  std::vector<cplx> ab(static_cast<std::size_t>(ldab) * n, 0.0);
  std::vector<double> colsum(n, 0.0);
  std::vector<cplx> b(n, 0.0);
  auto put = [&](int row, int col, cplx v) {
    ab[static_cast<std::size_t>(kl + ku + row - col) + static_cast<std::size_t>(col) * ldab] = v;
    colsum[col] += std::abs(v);
  };
  auto vi = [](int i) { return 2 * i; };
  auto wi = [](int i) { return 2 * i + 1; };

  // Boundary rows at y = 0 with a one-sided second-order derivative.
  const auto c0 = fornberg_weights(y[0], {y[0], y[1], y[2]}, 1)[1];
  if (alpha == 0) {
    put(0, vi(0), 1.0);
  } else {
    for (int j = 0; j < 3; ++j) put(0, vi(j), -alpha * mu * c0[j]);
    put(0, wi(0), -mu * kI * k);
  }
  put(1, vi(0), kI * k);
  for (int j = 0; j < 3; ++j) put(1, wi(j), c0[j]);

  for (int i = 1; i + 1 < m; ++i) {
    const double hm = y[i] - y[i - 1], hp = y[i + 1] - y[i];
    const double a = 2.0 / (hm * (hm + hp)), c = 2.0 / (hp * (hm + hp)), d = -2.0 / (hm * hp);
    for (int comp = 0; comp < 2; ++comp) {
      const int r = 2 * i + comp;
      put(r, r - 2, -mu * a);
      put(r, r, w2 - mu * d);
      put(r, r + 2, -mu * c);
    }
    b[vi(i)] = -kI * k * pressure.value(y[i]);
    b[wi(i)] = -pressure.derivative(y[i]);
  }
  put(vi(m - 1), vi(m - 1), 1.0);
  put(wi(m - 1), wi(m - 1), 1.0);

  const double anorm = *std::max_element(colsum.begin(), colsum.end());
  std::vector<lapack_int> ipiv(n);
  lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, ab.data(), ldab, ipiv.data());
  if (info != 0) throw IllConditionedError("oracle_fd_solve: banded factorization failed (info " + std::to_string(info) + ")");
  double rcond = 0.0;
  info = LAPACKE_zgbcon(LAPACK_COL_MAJOR, '1', n, kl, ku, ab.data(), ldab, ipiv.data(), anorm, &rcond);
  if (info != 0 || rcond < 1e-14) {
    throw IllConditionedError("oracle_fd_solve: banded system ill-conditioned (rcond " + format_double(rcond) + ")");
  }
  info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1, ab.data(), ldab, ipiv.data(), b.data(), n);
  if (info != 0) throw IllConditionedError("oracle_fd_solve: banded solve failed");

  std::vector<cplx> v(m), w(m);
  for (int i = 0; i < m; ++i) {
    v[i] = b[vi(i)];
    w[i] = b[wi(i)];
  }
  FdSolution out;
  out.grid = grid;
  out.rcond = rcond;
  out.velocity = VectorModeProfile(mode.dim());
  for (int j = 0; j < mode.dim() - 1; ++j) {
    std::vector<cplx> comp(m);
    for (int i = 0; i < m; ++i) comp[i] = (mode.xi[j] / k) * v[i];
    out.velocity.tangential[j] = ScalarModeProfile::tabulated(grid, std::move(comp));
  }
  out.velocity.normal = ScalarModeProfile::tabulated(grid, std::move(w));
  return out;
}

std::string to_string(TraceRelation r) {
  switch (r) {
    case TraceRelation::T00: return "T00";
    case TraceRelation::T10: return "T10";
    case TraceRelation::T11: return "T11";
  }
  return "?";
}

VerificationReport verify_trace_relations(const std::vector<ModeParams>& modes, int alpha, TraceRelation relation,
                                          const QuadratureCfg& cfg, Execution exec) {
  require_alpha(alpha, "verify_trace_relations");
  cfg.validate();
  if (relation == TraceRelation::T00 && alpha != 0) throw DomainError("verify_trace_relations: T00 needs alpha = 0");
  if (relation == TraceRelation::T10 && alpha == 0) throw DomainError("verify_trace_relations: T10 needs alpha = +-1");

  struct Outcome {
    ReportRow row;
    double error = 0.0;
  };
  std::vector<Outcome> out(modes.size());
  for_each_index(modes.size(), exec, [&](std::size_t i) {
    const ModeParams& m = modes[i];
    if (m.is_zero_mode()) throw ZeroModeError("verify_trace_relations: xi = 0 in " + mode_key(m));
    const KernelSpec kw = velocity_kernel(m, alpha, true);
    const double k = m.xi_norm;
    cplx trace, multiplier;
    KernelApplication app;
    if (relation == TraceRelation::T11) {
      // Dirichlet pressure e^{-k y}: forcing -p' = k e^{-k y}; normal stress -2 mu w'(0) + p(0).
      app = apply_kernel(kw, ScalarModeProfile::exponential(k, k), {0.0}, cfg, 1);
      trace = -2.0 * m.constants.mu * app.values[0] + 1.0;
      multiplier = trace_multiplier(m, BcSpec(alpha, 1));
    } else {
      // Neumann pressure (1/k) e^{-k y}: forcing -p' = e^{-k y}; trace w(0).
      app = apply_kernel(kw, ScalarModeProfile::exponential(1.0, k), {0.0}, cfg, 0);
      trace = app.values[0];
      multiplier = trace_multiplier(m, BcSpec(alpha, 0));
    }
    const double err = std::abs(multiplier * trace - 1.0);
    out[i].error = err;
    out[i].row.key = mode_key(m);
    out[i].row.metrics = {{"rel_error", err},
                          {"trace_re", trace.real()},
                          {"trace_im", trace.imag()},
                          {"multiplier_re", multiplier.real()},
                          {"multiplier_im", multiplier.imag()},
                          {"quadrature_error_estimate", app.max_error_estimate},
                          {"closed_form_gap", app.max_rel_gap},
                          {"subdivisions", static_cast<double>(app.subdivisions)}};
  });

  VerificationReport rep;
  rep.name = "trace " + to_string(relation) + " alpha=" + std::to_string(alpha);
  rep.tolerance = 1e-7;
  if (relation == TraceRelation::T11) {
    rep.notes.push_back("pressure: Dirichlet extension of h = 1; compared quantity: multiplier(alpha,+1) * (-2 mu w'(0) + p(0))");
    if (alpha == 0) rep.notes.push_back("alpha = 0: multiplier is the identity and w'(0) vanishes");
  } else {
    rep.notes.push_back("pressure: Neumann extension (1/|xi|) e^{-|xi| y} of h = 1, forcing -p' = e^{-|xi| y}; compared quantity: multiplier(alpha,0) * w(0)");
  }
  for (auto& o : out) rep.add(std::move(o.row), o.error);
  return rep;
}

}  // namespace hstokes
