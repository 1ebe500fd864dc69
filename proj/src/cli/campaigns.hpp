// SPDX-License-Identifier: Apache-2.0
//
// Typed campaign configurations shared by the config reader and the command runners.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hstokes/cli.hpp"
#include "hstokes/energy_audit.hpp"
#include "hstokes/navier_stokes_local.hpp"
#include "hstokes/quadrature.hpp"
#include "hstokes/sampling.hpp"
#include "hstokes/symbol_sweep.hpp"

namespace hstokes::cli {

struct YGridCfg {
  std::string kind = "graded";
  int points = 129;
  double length = 40.0;
  double stretch = 1.03;
  YGridPtr make() const;
};

struct StripCfg {
  double period_scale = 1.0;
  std::vector<int> nx = {16};
  YGridCfg y;
  TensorGrid make() const;
};

struct VerifySymbolsCfg {
  std::uint64_t seed = 1;
  int modes = 10000;
  ModeSampleCfg sampling;
  SymbolSweepTolerances tolerances;
};

struct VerifyTracesCfg {
  std::uint64_t seed = 1;
  int modes = 300;
  ModeSampleCfg sampling;
  QuadratureCfg quadrature;
  double tolerance = 1e-7;
  std::vector<std::string> relations = {"T00", "T10", "T11"};
};

struct SolveMode {
  std::vector<int> m;
  cplx h_w = 1.0;
};

struct SolveCfg {
  std::uint64_t seed = 1;
  FluidConstants constants{1.0, 1.0, 1.0};
  BcSpec bc{1, 1};
  double lambda = 0.0;
  StripCfg grid{1.0, {16}, {"graded", 257, 25.0, 1.025}};
  std::vector<SolveMode> modes;
  double residual_tol = 1e-6;
};

struct EnergyAuditCfg {
  std::uint64_t seed = 1;
  ClassificationCfg classification;
  std::vector<BcSpec> conditions = BcSpec::all();
  bool balance_enabled = true;
  BalanceStudyCfg balance;
  double order = 2.0;
  double order_tol = 0.3;
};

struct RunNsCfg {
  std::uint64_t seed = 1;
  NsConfig ns;
  StripCfg grid;
  double amplitude = 1e-3;
  double energy_tol = 1e-8;
  double divergence_tol = 1e-6;
};

VerifySymbolsCfg parse_verify_symbols(const json& raw);
VerifyTracesCfg parse_verify_traces(const json& raw);
SolveCfg parse_solve(const json& raw);
EnergyAuditCfg parse_energy_audit(const json& raw);
RunNsCfg parse_run_ns(const json& raw);

json to_json(const VerifySymbolsCfg& c);
json to_json(const VerifyTracesCfg& c);
json to_json(const SolveCfg& c);
json to_json(const EnergyAuditCfg& c);
json to_json(const RunNsCfg& c);

/// Stream function a L sin(x0 / L) y^2 e^{-y} (L the period scale): divergence free, u = 0 and du/dy = 0 on y = 0.
SampledField stream_initial_field(const TensorGrid& grid, double amplitude);

}  // namespace hstokes::cli
