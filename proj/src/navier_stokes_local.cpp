// SPDX-License-Identifier: Apache-2.0
#include "hstokes/navier_stokes_local.hpp"

#include <algorithm>
#include <cmath>

#include "hstokes/errors.hpp"
#include "hstokes/parabolic_div.hpp"
#include "hstokes/report.hpp"

namespace hstokes {

namespace {

void require_same_grid(const SampledField& a, const SampledField& b, const char* ctx) {
  if (a.grid.n != b.grid.n || a.grid.nx != b.grid.nx || a.grid.period_scale != b.grid.period_scale ||
      !a.grid.y->same_nodes(*b.grid.y)) {
    throw DomainError(std::string(ctx) + ": fields live on different grids");
  }
}

[[noreturn]] void rethrow_with(const std::exception_ptr& e, const std::string& msg) {
  try {
    std::rethrow_exception(e);
  } catch (const ZeroModeError&) {
    throw ZeroModeError(msg);
  } catch (const IncompatibleDataError&) {
    throw IncompatibleDataError(msg);
  } catch (const DomainError&) {
    throw DomainError(msg);
  } catch (const SingularModeError&) {
    throw SingularModeError(msg);
  } catch (const QuadratureBudgetError&) {
    throw QuadratureBudgetError(msg);
  } catch (const IllConditionedError&) {
    throw IllConditionedError(msg);
  } catch (const UnsupportedCaseError&) {
    throw UnsupportedCaseError(msg);
  } catch (...) {
    throw std::runtime_error(msg);
  }
}

double sup_gap(const SampledField& a, const SampledField& b) {
  double g = 0.0;
  for (std::size_t c = 0; c < a.u.size(); ++c) {
    for (std::size_t k = 0; k < a.u[c].size(); ++k) g = std::max(g, std::abs(a.u[c][k] - b.u[c][k]));
  }
  return g;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct ModeSolution {
  std::vector<std::vector<cplx>> u;  // per component, node values
  std::vector<cplx> p;
};

// Mean mode: tangential velocity from the parabolic resolvent, w = 0 (div u = w' with decay), and the
// pressure balancing the normal force: p' = rho F_w, gauge p(Y) = 0 for beta = 0 and p(0) = 0 otherwise.
ModeSolution mean_mode(const ModeParams& mode, const BcSpec& bc, const std::vector<std::vector<cplx>>& rhs,
                       const YGridPtr& y) {
  const int n = mode.dim();
  const double rho = mode.constants.rho;
  VectorModeProfile F(n);
  for (int d = 0; d < n - 1; ++d) {
    std::vector<cplx> v = rhs[d];
    for (cplx& x : v) x *= rho;
    F.tangential[d] = ScalarModeProfile::tabulated(y, std::move(v));
  }
  const VectorModeProfile vel = parabolic_resolvent_mode(mode, bc.alpha, F, std::vector<cplx>(n - 1, 0.0), 0.0);
  ModeSolution s;
  for (int d = 0; d < n - 1; ++d) s.u.push_back(vel.tangential[d].sample(*y));
  s.u.emplace_back(static_cast<std::size_t>(y->size()), 0.0);
  std::vector<cplx> fw = rhs[n - 1];
  for (cplx& x : fw) x *= rho;
  s.p = cumulative_integral(ScalarModeProfile::tabulated(y, std::move(fw))).sample(*y);
  if (bc.beta == 0) {
    const cplx end = s.p.back();
    for (cplx& x : s.p) x -= end;
  }
  return s;
}

}  // namespace

SampledField nonlinearity(const SampledField& u_bar, const SampledField& u_star) {
  require_same_grid(u_bar, u_star, "nonlinearity");
  const int n = u_bar.grid.n;
  SampledField U = u_bar;
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < U.u[i].size(); ++k) U.u[i][k] += u_star.u[i][k];
  }
  const TensorField J = gradient_tensor(U);
  SampledField out = zero_field(u_bar.grid);
  out.time = u_bar.time;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto& Jij = J.at(i, j);
      for (std::size_t k = 0; k < Jij.size(); ++k) out.u[i][k] -= U.u[j][k] * Jij[k];
    }
  }
  return out;
}

NsState backward_euler_step(const NsState& state, double dt, const BcSpec& bc, const FluidConstants& constants,
                            const SampledField* force, const SampledField* convective, Execution exec) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("backward_euler_step: dt must be positive");
  const SampledField& old = state.field;
  const TensorGrid& g = old.grid;
  g.validate();
  if (force) require_same_grid(old, *force, "backward_euler_step");
  if (convective) require_same_grid(old, *convective, "backward_euler_step");
  const int n = g.n;
  const FluidConstants shifted{constants.rho, constants.mu, 1.0 / dt};
  shifted.validate();

  std::vector<std::vector<std::vector<cplx>>> rhs(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    std::vector<double> r(old.u[c].size());
    for (std::size_t k = 0; k < r.size(); ++k) {
      r[k] = old.u[c][k] / dt + (force ? force->u[c][k] : 0.0) + (convective ? convective->u[c][k] : 0.0);
    }
    rhs[c] = mode_coefficients(g, r);
  }

  const std::size_t bins = g.plane_size();
  const std::size_t ny = static_cast<std::size_t>(g.ny());
  std::vector<ModeSolution> sol(bins);
  std::vector<std::exception_ptr> errors(bins);
  std::vector<std::string> messages(bins);
  for_each_index(bins, exec, [&](std::size_t b) {
    const std::vector<int> idx = g.unflatten(b);
    std::vector<double> xi(static_cast<std::size_t>(n - 1));
    bool nyquist = false, mean = true;
    for (int d = 0; d < n - 1; ++d) {
      nyquist = nyquist || 2 * idx[d] == g.nx[d];
      xi[d] = g.wavenumber(d, idx[d]);
      mean = mean && idx[d] == 0;
    }
    std::vector<std::vector<cplx>> data(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) data[c] = rhs[c][b];
    try {
      if (nyquist) {
        sol[b].u.assign(static_cast<std::size_t>(n), std::vector<cplx>(ny, 0.0));
        sol[b].p.assign(ny, 0.0);
        return;
      }
      const ModeParams mode = derive_mode(shifted, 0.0, xi);
      if (mean) {
        sol[b] = mean_mode(mode, bc, data, g.y);
        return;
      }
      VectorModeProfile F(n);
      for (int c = 0; c < n; ++c) F.component(c) = ScalarModeProfile::tabulated(g.y, std::move(data[c]));
      const SplittingResult r = splitting_solve_mode(mode, bc, F, ScalarModeProfile(), 0.0);
      for (int c = 0; c < n; ++c) sol[b].u.push_back(r.profile.velocity.component(c).sample(*g.y));
      sol[b].p = r.profile.pressure.sample(*g.y);
    } catch (const std::exception& e) {
      errors[b] = std::current_exception();
      std::string key;
      for (int d = 0; d < n - 1; ++d) key += (d ? "," : "") + std::to_string(idx[d] < g.nx[d] / 2 ? idx[d] : idx[d] - g.nx[d]);
      messages[b] = "mode (" + key + "): " + e.what();
    }
  });
  std::exception_ptr first;
  std::string msg;
  int failed = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    if (!errors[b]) continue;
    if (!first) first = errors[b];
    msg += (failed++ ? "; " : "") + messages[b];
  }
  if (first) rethrow_with(first, "backward_euler_step: " + std::to_string(failed) + " mode solve(s) failed: " + msg);

  NsState next;
  next.field = zero_field(g);
  next.time = state.time + dt;
  next.field.time = next.time;
  std::vector<std::vector<cplx>> coeff(bins);
  for (int c = 0; c <= n; ++c) {
    for (std::size_t b = 0; b < bins; ++b) coeff[b] = c < n ? sol[b].u[c] : sol[b].p;
    (c < n ? next.field.u[c] : next.field.p) = synthesize_from_modes(g, coeff);
  }
  next.history.push_back(old);
  if (!state.history.empty()) next.history.push_back(state.history.front());
  return next;
}

std::string to_string(IterationVerdict v) {
  switch (v) {
    case IterationVerdict::converged: return "converged";
    case IterationVerdict::max_iter: return "max_iter";
    case IterationVerdict::blowup_suspected: return "blowup_suspected";
  }
  return "unknown";
}

double kinetic_energy(const SampledField& f, const FluidConstants& c) {
  std::vector<double> e(f.grid.size(), 0.0);
  for (const auto& comp : f.u) {
    for (std::size_t k = 0; k < e.size(); ++k) e[k] += comp[k] * comp[k];
  }
  return 0.5 * c.rho * volume_integral(f.grid, e);
}

double boundary_defect(const SampledField& f, const BcSpec& bc, const FluidConstants& c) {
  const TensorGrid& g = f.grid;
  const int n = g.n;
  const int y = n - 1;
  const std::size_t plane = g.plane_size();
  const bool needs_gradient = bc.alpha != 0 || bc.beta == 1;
  const TensorField J = needs_gradient ? gradient_tensor(f) : TensorField();
  double defect = 0.0;
  for (std::size_t k = 0; k < plane; ++k) {
    for (int d = 0; d < y; ++d) {
      const double t = bc.alpha == 0 ? f.u[d][k] : -bc.alpha * c.mu * J.at(d, y)[k] - c.mu * J.at(y, d)[k];
      defect = std::max(defect, std::abs(t));
    }
    const double nn = bc.beta == 0 ? f.u[y][k] : bc.beta == 1 ? -2.0 * c.mu * J.at(y, y)[k] + f.p[k] : f.p[k];
    defect = std::max(defect, std::abs(nn));
  }
  return defect;
}

NsRun picard_solve(const SampledField& u0, const ForcingFn& forcing, const NsConfig& cfg) {
  cfg.constants.validate();
  if (!(cfg.dt > 0.0) || !(cfg.dt_min > 0.0) || !(cfg.horizon >= 0.0) || !(cfg.tol > 0.0) || cfg.max_iter < 1 ||
      cfg.growth_limit < 1) {
    throw DomainError("picard_solve: dt, dt_min, tol must be positive, horizon >= 0, max_iter and growth_limit >= 1");
  }
  if (cfg.dt < cfg.dt_min) throw DomainError("picard_solve: dt below dt_min");
  NsRun run;
  run.compatibility = check_compatibility(u0, {}, {}, {}, cfg.bc, cfg.p_exponent, cfg.constants);
  if (!run.compatibility.passed()) {
    std::string what;
    for (const auto& c : run.compatibility.conditions) {
      if (!c.passed) what += " " + c.name + " (defect " + format_double(c.defect) + ")";
    }
    throw IncompatibleDataError("picard_solve: initial data violate" + what);
  }
  if (!(cfg.p_exponent > u0.grid.n + 2)) {
    run.warnings.push_back("p exponent " + format_double(cfg.p_exponent) + " does not exceed n + 2; local theory not covered");
  }

  auto record = [&](const SampledField& f) {
    run.states.push_back(f);
    run.kinetic.push_back(kinetic_energy(f, cfg.constants));
    run.divergence.push_back(sup_abs(divergence(f)));
    run.boundary_defect.push_back(boundary_defect(f, cfg.bc, cfg.constants));
  };

  NsState state{u0, u0.time, {}};
  record(u0);
  const SampledField zero = zero_field(u0.grid);
  const double t_end = u0.time + cfg.horizon;
  double dt = cfg.dt;
  int step = 0;
  while (state.time < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
    IterationReport rep;
    rep.step = ++step;
    bool accepted = false;
    NsState next;
    while (!accepted) {
      const double h = std::min(dt, t_end - state.time);
      const SampledField force = forcing ? forcing(state.time + h) : zero;
      rep.dt = h;
      rep.gaps.clear();
      rep.ratios.clear();
      SampledField iterate = state.field;
      int growth = 0;
      bool halve = false;
      for (int k = 1; k <= cfg.max_iter; ++k) {
        const SampledField conv = cfg.nonlinear ? nonlinearity(iterate, zero) : zero;
        next = backward_euler_step(state, h, cfg.bc, cfg.constants, &force, cfg.nonlinear ? &conv : nullptr, cfg.exec);
        const double gap = sup_gap(next.field, iterate);
        rep.gaps.push_back(gap);
        if (k >= 2) rep.ratios.push_back(rep.gaps[k - 2] > 0.0 ? gap / rep.gaps[k - 2] : 0.0);
        iterate = next.field;
        if (!cfg.nonlinear || gap < cfg.tol) {
          accepted = true;
          break;
        }
        growth = (k >= 2 && gap > rep.gaps[k - 2]) ? growth + 1 : 0;
        if (growth >= cfg.growth_limit) {
          halve = true;
          break;
        }
      }
      if (accepted) break;
      if (!halve) {
        rep.verdict = IterationVerdict::max_iter;
        run.verdict = IterationVerdict::max_iter;
        run.steps.push_back(rep);
        return run;
      }
      dt *= 0.5;
      ++rep.dt_halvings;
      if (dt < cfg.dt_min) {
        rep.verdict = IterationVerdict::blowup_suspected;
        run.verdict = IterationVerdict::blowup_suspected;
        run.steps.push_back(rep);
        return run;
      }
    }
    rep.time = next.time;
    run.steps.push_back(rep);
    state = std::move(next);
    record(state.field);
    const std::size_t m = run.kinetic.size();
    if (cfg.bc.bc_class() == BcClass::B1 && !forcing && run.kinetic[m - 1] > run.kinetic[m - 2] + 1e-8 * run.kinetic[0]) {
      run.warnings.push_back("step " + std::to_string(step) + ": kinetic energy increased by " +
                             format_double(run.kinetic[m - 1] - run.kinetic[m - 2]));
    }
    if (run.divergence.back() >= 1e-6) {
      run.warnings.push_back("step " + std::to_string(step) + ": sampled divergence " + format_double(run.divergence.back()));
    }
  }
  return run;
}

}  // namespace hstokes
