// SPDX-License-Identifier: Apache-2.0
#include "hstokes/stokes_halfspace.hpp"

#include <algorithm>
#include <cmath>

#include "hstokes/elliptic_weak.hpp"
#include "hstokes/errors.hpp"
#include "hstokes/parabolic_div.hpp"

namespace hstokes {

ModeProfile ModeProfile::from_ansatz(const ModeParams& mode, const CVector& z_v, cplx z_w) {
  const int n = mode.dim();
  if (z_v.size() != n - 1) throw DomainError("ModeProfile::from_ansatz: z_v must have n - 1 entries");
  const cplx s = mode.velocity_rate();
  const double k = mode.xi_norm;
  ModeProfile p;
  p.mode = mode;
  p.velocity = VectorModeProfile(n);
  cplx izeta_z = 0.0;
  for (int j = 0; j < n - 1; ++j) {
    const cplx iz = kI * mode.zeta[j];
    p.velocity.tangential[j] = ScalarModeProfile::exponential(mode.omega * z_v(j), s) +
                               ScalarModeProfile::exponential(-iz * z_w, k);
    izeta_z += iz * z_v(j);
  }
  p.velocity.normal = ScalarModeProfile::exponential(izeta_z, s) + ScalarModeProfile::exponential(mode.zeta_norm * z_w, k);
  p.pressure = ScalarModeProfile::exponential(mode.kappa * mode.lambda_eps * z_w, k);
  p.ansatz = AnsatzCoefficients{z_v, z_w};
  return p;
}

ModeProfile ModeProfile::zero(const ModeParams& mode) {
  ModeProfile p;
  p.mode = mode;
  p.velocity = VectorModeProfile(mode.dim());
  return p;
}

ModeProfile ModeProfile::conj() const {
  ModeProfile c;
  std::vector<double> xi(mode.xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) xi[j] = -mode.xi[j];
  c.mode = derive_mode(mode.constants, std::conj(mode.lambda), std::move(xi));
  c.velocity = velocity.conj();
  c.pressure = pressure.conj();
  if (ansatz) {
    c.ansatz = AnsatzCoefficients{ansatz->z_v.conjugate(), std::conj(ansatz->z_w)};
  }
  return c;
}

ModeProfile& ModeProfile::operator+=(const ModeProfile& o) {
  if (o.mode.xi != mode.xi || o.mode.lambda != mode.lambda) throw DomainError("ModeProfile: adding profiles of different modes");
  velocity += o.velocity;
  pressure += o.pressure;
  if (ansatz && o.ansatz) {
    ansatz->z_v += o.ansatz->z_v;
    ansatz->z_w += o.ansatz->z_w;
  } else {
    ansatz.reset();
  }
  return *this;
}

ModeProfile& ModeProfile::operator*=(cplx s) {
  velocity *= s;
  pressure *= s;
  if (ansatz) {
    ansatz->z_v *= s;
    ansatz->z_w *= s;
  }
  return *this;
}

BoundaryValues boundary_values(const ModeProfile& p, const BcSpec& bc) {
  const ModeParams& m = p.mode;
  const double mu = m.constants.mu;
  const int t = m.dim() - 1;
  const ScalarModeProfile& w = p.velocity.normal;
  BoundaryValues b;
  b.tangential.resize(t);
  b.tangential_scale.resize(t);
  for (int j = 0; j < t; ++j) {
    const ScalarModeProfile& v = p.velocity.tangential[j];
    if (bc.alpha == 0) {
      b.tangential[j] = v.value(0.0);
      b.tangential_scale[j] = v.magnitude(0.0);
    } else {
      b.tangential[j] = -bc.alpha * mu * v.derivative(0.0) - mu * kI * m.xi[j] * w.value(0.0);
      b.tangential_scale[j] = mu * v.magnitude(0.0, 1) + mu * std::abs(m.xi[j]) * w.magnitude(0.0);
    }
  }
  switch (bc.beta) {
    case 0:
      b.normal = w.value(0.0);
      b.normal_scale = w.magnitude(0.0);
      break;
    case 1:
      b.normal = -2.0 * mu * w.derivative(0.0) + p.pressure.value(0.0);
      b.normal_scale = 2.0 * mu * w.magnitude(0.0, 1) + p.pressure.magnitude(0.0);
      break;
    default:
      b.normal = p.pressure.value(0.0);
      b.normal_scale = p.pressure.magnitude(0.0);
      break;
  }
  b.divergence = w.derivative(0.0);
  for (int j = 0; j < t; ++j) b.divergence += kI * m.xi[j] * p.velocity.tangential[j].value(0.0);
  return b;
}

ModeResiduals mode_residuals(const ModeProfile& p, const BcSpec& bc, const ModeData& data,
                             const std::vector<double>& y_samples) {
  const ModeParams& m = p.mode;
  const int n = m.dim();
  const double mu = m.constants.mu;
  const double rho = m.constants.rho;
  const cplx w2 = m.omega * m.omega;
  const VectorModeProfile gp = mode_gradient(m.xi, p.pressure);
  ModeResiduals r;
  double mom = 0.0, mom_scale = 0.0, div = 0.0, div_scale = 0.0;
  for (double y : y_samples) {
    for (int c = 0; c < n; ++c) {
      const ScalarModeProfile& u = p.velocity.component(c);
      const cplx a = w2 * u.value(y);
      const cplx b = mu * u.derivative(y, 2);
      const cplx g = gp.component(c).value(y);
      const cplx f = data.f.dim() == n ? rho * data.f.component(c).value(y) : cplx(0.0);
      mom = std::max(mom, std::abs(a - b + g - f));
      mom_scale = std::max({mom_scale, std::abs(a), std::abs(b), std::abs(g), std::abs(f)});
    }
    cplx d = p.velocity.normal.derivative(y);
    double ds = std::abs(d);
    for (int j = 0; j < n - 1; ++j) {
      const cplx term = kI * m.xi[j] * p.velocity.tangential[j].value(y);
      d += term;
      ds = std::max(ds, std::abs(term));
    }
    const cplx gv = data.g.value(y);
    div = std::max(div, std::abs(d - gv));
    div_scale = std::max({div_scale, ds, std::abs(gv)});
  }
  r.momentum = mom_scale > 0.0 ? mom / mom_scale : mom;
  r.divergence = div_scale > 0.0 ? div / div_scale : div;

  const BoundaryValues bv = boundary_values(p, bc);
  for (int j = 0; j < n - 1; ++j) {
    const cplx h = j < static_cast<int>(data.h_t.size()) ? data.h_t[j] : cplx(0.0);
    const double scale = std::max(bv.tangential_scale[j], std::abs(h));
    const double e = std::abs(bv.tangential[j] - h);
    r.tangential = std::max(r.tangential, scale > 0.0 ? e / scale : e);
  }
  const double e = std::abs(bv.normal - data.h_w);
  r.normal = std::abs(data.h_w) > 0.0 ? e / std::abs(data.h_w) : (bv.normal_scale > 0.0 ? e / bv.normal_scale : e);
  return r;
}

ModeData forward_data(const ModeProfile& p, const BcSpec& bc) {
  const ModeParams& m = p.mode;
  const int n = m.dim();
  const VectorModeProfile gp = mode_gradient(m.xi, p.pressure);
  ModeData d;
  d.f = VectorModeProfile(n);
  const cplx w2 = m.omega * m.omega;
  for (int c = 0; c < n; ++c) {
    const ScalarModeProfile& u = p.velocity.component(c);
    ScalarModeProfile f = w2 * u - cplx(m.constants.mu) * u.derivative_profile().derivative_profile() + gp.component(c);
    d.f.component(c) = f * cplx(1.0 / m.constants.rho);
  }
  d.g = mode_divergence(m.xi, p.velocity);
  const BoundaryValues bv = boundary_values(p, bc);
  d.h_t = bv.tangential;
  d.h_w = bv.normal;
  return d;
}

ModeProfile solve_mode(const ModeParams& mode, const BcSpec& bc, cplx h_w) {
  if (mode.is_zero_mode()) throw ZeroModeError("solve_mode: xi = 0 has no decaying halfspace solution");
  if (bc.beta != -1) {
    const CVector z = solve_symbol(mode, bc, h_w);
    const int t = mode.dim() - 1;
    return ModeProfile::from_ansatz(mode, z.head(t), z(t));
  }
  const int t = mode.dim() - 1;
  const double mu = mode.constants.mu;
  ModeProfile p;
  p.mode = mode;
  p.pressure = dirichlet_extend_mode(mode.xi, h_w);
  p.velocity = parabolic_solve_mode(mode, bc.alpha, p.pressure, PressureKind::dirichlet);
  // Ansatz weights of the same solution: z_w from the pressure, z_v from the tangential rows.
  const cplx z_w = h_w / (mode.kappa * mode.lambda_eps);
  CVector zv(t);
  if (bc.alpha == 0) {
    for (int j = 0; j < t; ++j) zv(j) = kI * mode.zeta[j] * z_w / mode.omega;
  } else {
    const double a = bc.alpha;
    const cplx s = mode.velocity_rate();
    CMatrix sys(t, t);
    CVector rhs(t);
    for (int i = 0; i < t; ++i) {
      for (int j = 0; j < t; ++j) sys(i, j) = -mu * kI * mode.xi[i] * kI * mode.zeta[j];
      sys(i, i) += a * mu * s * mode.omega;
      rhs(i) = a * mu * mode.xi_norm * kI * mode.zeta[i] * z_w + mu * kI * mode.xi[i] * mode.zeta_norm * z_w;
    }
    zv = sys.partialPivLu().solve(rhs);
  }
  p.ansatz = AnsatzCoefficients{zv, z_w};
  return p;
}

namespace {

template <class Fn>
auto in_step(const char* step, Fn&& fn) -> decltype(fn()) {
  const std::string prefix = std::string("splitting ") + step + ": ";
  try {
    return fn();
  } catch (const ZeroModeError& e) {
    throw ZeroModeError(prefix + e.what());
  } catch (const IncompatibleDataError& e) {
    throw IncompatibleDataError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const SingularModeError& e) {
    throw SingularModeError(prefix + e.what());
  } catch (const QuadratureBudgetError& e) {
    throw QuadratureBudgetError(prefix + e.what());
  } catch (const IllConditionedError& e) {
    throw IllConditionedError(prefix + e.what());
  } catch (const UnsupportedCaseError& e) {
    throw UnsupportedCaseError(prefix + e.what());
  }
}

}  // namespace

SplittingResult splitting_solve_mode(const ModeParams& mode, const BcSpec& bc, const VectorModeProfile& f,
                                     const ScalarModeProfile& g, cplx h_w, const std::vector<cplx>& h_t) {
  if (mode.is_zero_mode()) throw ZeroModeError("splitting_solve_mode: xi = 0");
  const int n = mode.dim();
  if (f.dim() != n) throw DomainError("splitting_solve_mode: force has the wrong dimension");
  std::vector<cplx> tangential = h_t;
  if (tangential.empty()) tangential.assign(n - 1, 0.0);
  if (static_cast<int>(tangential.size()) != n - 1) throw DomainError("splitting_solve_mode: tangential datum size");
  const double rho = mode.constants.rho;

  SplittingResult out;
  out.step1_pressure = in_step("step 1", [&] {
    ScalarModeProfile q = g.is_zero() ? ScalarModeProfile() : divergence_pressure_mode(mode, g);
    if (bc.beta != 0) q += dirichlet_extend_mode(mode.xi, h_w);
    return q;
  });

  out.step2 = in_step("step 2", [&] {
    bool closed = !g.has_table();
    for (int c = 0; c < n; ++c) closed = closed && !f.component(c).has_table();
    ModeProfile s = ModeProfile::zero(mode);
    VectorModeProfile forcing(n);
    if (closed) {
      // step1 + rho q_w from one solve on the merged source; forcing rho f - grad of that pressure.
      ScalarModeProfile src = divergence_pressure_source(mode, g);
      src -= mode_divergence(mode.xi, f) * cplx(rho);
      s.pressure = solve_elliptic_mode(mode.xi, src, EllipticBc::dirichlet_zero);
      if (bc.beta != 0) s.pressure += dirichlet_extend_mode(mode.xi, h_w);
      forcing = cplx(rho) * f;
      forcing -= mode_gradient(mode.xi, s.pressure);
    } else {
      // f = Wf + grad q_w with q_w in the zero-trace class.
      const ScalarModeProfile q_w = solve_weak_elliptic_mode(mode.xi, cplx(-1.0) * f, EllipticBc::dirichlet_zero);
      forcing = cplx(-1.0) * mode_gradient(mode.xi, out.step1_pressure);
      forcing += cplx(rho) * (f - mode_gradient(mode.xi, q_w));
      s.pressure = out.step1_pressure + cplx(rho) * q_w;
    }
    s.velocity = parabolic_resolvent_mode(mode, bc.alpha, forcing, tangential, g.value(0.0));
    return s;
  });

  out.profile = out.step2;
  if (bc.beta == -1) return out;

  out.step3_applied = true;
  const BoundaryValues bv = boundary_values(out.step2, bc);
  out.residual_datum = h_w - bv.normal;
  out.profile += in_step("step 3", [&] { return solve_mode(mode, bc, out.residual_datum); });
  return out;
}

}  // namespace hstokes
