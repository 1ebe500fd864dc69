// SPDX-License-Identifier: Apache-2.0
//
// Desk-scale Navier-Stokes on a tangentially periodic strip: backward Euler in time, each step a
// shifted Stokes resolvent (epsilon = 1/dt, lambda = 0) solved mode by mode, with the convective term
// handled by Picard iteration.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hstokes/energy_audit.hpp"
#include "hstokes/field.hpp"

namespace hstokes {

struct NsState {
  SampledField field;
  double time = 0.0;
  std::vector<SampledField> history;  // most recent first, at most two entries
};

/// -((u_bar + u_star) . grad)(u_bar + u_star); spectral in x, fourth-order differences in y.
SampledField nonlinearity(const SampledField& u_bar, const SampledField& u_star);

/// One backward Euler step: per tangential mode, the shifted Stokes problem with right side
/// rho (u_old / dt + f + convective) and homogeneous boundary data. The mean mode is a 1D solve
/// (velocity by the reflected Green's function, pressure balancing the normal force); Nyquist bins
/// are set to zero. force and convective may be null.
NsState backward_euler_step(const NsState& state, double dt, const BcSpec& bc, const FluidConstants& constants,
                            const SampledField* force = nullptr, const SampledField* convective = nullptr,
                            Execution exec = Execution::parallel);

enum class IterationVerdict { converged, max_iter, blowup_suspected };
std::string to_string(IterationVerdict v);

struct IterationReport {
  int step = 0;
  double time = 0.0;  // time reached by the accepted step
  double dt = 0.0;
  std::vector<double> gaps;    // sup |u_{k+1} - u_k| per iteration
  std::vector<double> ratios;  // gaps[k] / gaps[k-1], from the second iteration on
  int dt_halvings = 0;
  IterationVerdict verdict = IterationVerdict::converged;
};

struct NsConfig {
  FluidConstants constants{1.0, 1.0, 1.0};  // epsilon unused: the step shift is 1/dt
  BcSpec bc{0, 0};
  double dt = 0.01;
  double dt_min = 1e-5;
  double horizon = 0.5;
  double tol = 1e-8;
  int max_iter = 10;
  int growth_limit = 3;     // consecutive gap increases that trigger a dt halving
  bool nonlinear = true;
  double p_exponent = 5.0;  // integrability exponent for the compatibility gate (needs n + 2 < p)
  Execution exec = Execution::parallel;
};

struct NsRun {
  std::vector<SampledField> states;  // initial state first
  std::vector<IterationReport> steps;
  std::vector<double> kinetic;        // per state
  std::vector<double> divergence;     // sup |div u| per state
  std::vector<double> boundary_defect;
  CompatibilityReport compatibility;
  IterationVerdict verdict = IterationVerdict::converged;
  std::vector<std::string> warnings;
};

using ForcingFn = std::function<SampledField(double time)>;

/// Steps from u0.time to u0.time + horizon. Throws IncompatibleDataError when u0 fails the
/// compatibility check for (bc, g = 0, h = 0) and DomainError on dt underflow.
NsRun picard_solve(const SampledField& u0, const ForcingFn& forcing, const NsConfig& cfg);

/// Sup over y = 0 of the homogeneous boundary operators applied to the sampled field.
double boundary_defect(const SampledField& field, const BcSpec& bc, const FluidConstants& constants);

double kinetic_energy(const SampledField& field, const FluidConstants& constants);

}  // namespace hstokes
