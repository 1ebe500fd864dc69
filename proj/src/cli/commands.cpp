// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "campaigns.hpp"
#include "hstokes/errors.hpp"
#include "hstokes/parabolic_div.hpp"

namespace hstokes::cli {

namespace fs = std::filesystem;

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) { line(header); }
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("csv row width mismatch");
    line(cells);
  }
  std::string str() const { return os_.str(); }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << csv_field(cells[i]);
    os_ << '\n';
  }
  std::size_t width_;
  std::ostringstream os_;
};

std::string num(double v) { return format_double(v); }
std::string num(int v) { return std::to_string(v); }

// Output directory plus the list of files written, in write order.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }
  void write(const std::string& name, const std::string& text) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    f << text;
    names_.push_back(name);
  }
  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

struct Result {
  int code = kSuccess;
  json summary = json::object();
  std::vector<std::string> warnings;
  std::string headline;
};

void breach_if(Result& r, bool failed) {
  if (failed && r.code == kSuccess) r.code = kToleranceBreach;
}

json report_json(const VerificationReport& rep) {
  return {{"name", rep.name},        {"tolerance", rep.tolerance}, {"max_error", rep.max_error},
          {"worst_key", rep.worst_key}, {"passed", rep.passed()},     {"rows", rep.rows.size()},
          {"notes", rep.notes},      {"warnings", rep.warnings}};
}

Result verify_symbols_cmd(const VerifySymbolsCfg& cfg, Outputs& out) {
  const auto modes = sample_modes(cfg.sampling, static_cast<std::size_t>(cfg.modes), cfg.seed);
  const auto reps = verify_symbols(modes, cfg.tolerances);
  Result r;

  std::vector<std::size_t> order(modes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return reps[0].rows[a].key < reps[0].rows[b].key; });
  std::vector<std::string> header = {"mode_key"};
  for (const auto& rep : reps) header.push_back(rep.name);
  header.insert(header.end(), {"max_condition", "double_symbol_gap"});
  Csv csv(header);
  for (std::size_t i : order) {
    std::vector<std::string> cells = {reps[0].rows[i].key};
    for (const auto& rep : reps) cells.push_back(num(rep.rows[i].metric("rel_error")));
    cells.push_back(num(reps[1].rows[i].metric("max_condition")));
    cells.push_back(num(reps[2].rows[i].metric("double_symbol_gap")));
    csv.row(cells);
  }
  out.write("verify_symbols.csv", csv.str());

  json checks = json::array();
  int failed = 0;
  for (const auto& rep : reps) {
    checks.push_back(report_json(rep));
    failed += !rep.passed();
  }
  r.summary = {{"modes", modes.size()}, {"checks", checks}};
  breach_if(r, failed > 0);
  r.headline = std::to_string(reps.size() - failed) + "/" + std::to_string(reps.size()) + " symbol checks passed";
  return r;
}

TraceRelation relation_from(const std::string& s) {
  return s == "T00" ? TraceRelation::T00 : s == "T10" ? TraceRelation::T10 : TraceRelation::T11;
}

std::vector<int> relation_alphas(TraceRelation rel) {
  if (rel == TraceRelation::T00) return {0};
  if (rel == TraceRelation::T10) return {-1, 1};
  return {-1, 0, 1};
}

Result verify_traces_cmd(const VerifyTracesCfg& cfg, Outputs& out) {
  const auto modes = sample_modes(cfg.sampling, static_cast<std::size_t>(cfg.modes), cfg.seed);
  const std::vector<std::string> metrics = {"rel_error",     "trace_re",
                                            "trace_im",      "multiplier_re",
                                            "multiplier_im", "quadrature_error_estimate",
                                            "closed_form_gap", "subdivisions"};
  std::vector<std::string> header = {"relation", "alpha", "mode_key"};
  header.insert(header.end(), metrics.begin(), metrics.end());
  Csv csv(header);
  Result r;
  json sweeps = json::array();
  int total = 0, failed = 0;
  for (const auto& name : cfg.relations) {
    const TraceRelation rel = relation_from(name);
    for (int alpha : relation_alphas(rel)) {
      VerificationReport rep = verify_trace_relations(modes, alpha, rel, cfg.quadrature);
      rep.tolerance = cfg.tolerance;
      std::vector<const ReportRow*> rows;
      for (const auto& row : rep.rows) rows.push_back(&row);
      std::stable_sort(rows.begin(), rows.end(), [](const ReportRow* a, const ReportRow* b) { return a->key < b->key; });
      for (const ReportRow* row : rows) {
        std::vector<std::string> cells = {name, num(alpha), row->key};
        for (const auto& m : metrics) cells.push_back(num(row->metric(m)));
        csv.row(cells);
      }
      json j = report_json(rep);
      j["relation"] = name;
      j["alpha"] = alpha;
      sweeps.push_back(j);
      ++total;
      failed += !rep.passed();
    }
  }
  out.write("verify_traces.csv", csv.str());
  r.summary = {{"modes", modes.size()}, {"sweeps", sweeps}};
  breach_if(r, failed > 0);
  r.headline = std::to_string(total - failed) + "/" + std::to_string(total) + " trace sweeps passed";
  return r;
}

double field_sup(const SampledField& f) {
  double s = 0.0;
  for (const auto& c : f.u)
    for (double v : c) s = std::max(s, std::abs(v));
  for (double v : f.p) s = std::max(s, std::abs(v));
  return s;
}

std::vector<double> sample_points(const ModeParams& m, const YGrid& y) {
  std::vector<double> out;
  const double len = std::min(y.length(), 10.0 / std::min(m.xi_norm, m.velocity_rate().real()));
  for (int i = 0; i <= 40; ++i) out.push_back(len * i / 40.0);
  return out;
}

Result solve_cmd(const SolveCfg& cfg, Outputs& out) {
  const TensorGrid grid = cfg.grid.make();
  std::vector<FieldTerm> terms;
  struct Row {
    std::string key;
    std::vector<std::string> cells;
  };
  std::vector<Row> rows;
  ModeResiduals worst;
  for (const auto& sm : cfg.modes) {
    std::vector<double> xi;
    for (int m : sm.m) xi.push_back(m / cfg.grid.period_scale);
    const ModeParams mode = derive_mode(cfg.constants, cfg.lambda, xi);
    const ModeProfile p = solve_mode(mode, cfg.bc, sm.h_w);
    terms.push_back({p, 1.0});
    terms.push_back({p.conj(), 1.0});
    ModeData data;
    data.f = VectorModeProfile(mode.dim());
    data.h_w = sm.h_w;
    const ModeResiduals res = mode_residuals(p, cfg.bc, data, sample_points(mode, *grid.y));
    worst.momentum = std::max(worst.momentum, res.momentum);
    worst.divergence = std::max(worst.divergence, res.divergence);
    worst.tangential = std::max(worst.tangential, res.tangential);
    worst.normal = std::max(worst.normal, res.normal);
    Row row;
    row.key = mode_key(mode);
    std::string m;
    for (std::size_t d = 0; d < sm.m.size(); ++d) m += (d ? " " : "") + std::to_string(sm.m[d]);
    row.cells = {m,
                 row.key,
                 num(sm.h_w.real()),
                 num(sm.h_w.imag()),
                 num(res.momentum),
                 num(res.divergence),
                 num(res.tangential),
                 num(res.normal)};
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.key < b.key; });
  Csv modes({"m", "mode_key", "h_w_re", "h_w_im", "momentum", "divergence", "tangential", "normal"});
  for (const auto& row : rows) modes.row(row.cells);

  const SampledField field = synthesize_field(terms, grid, 0.0);
  const double sup = field_sup(field);
  const double scale = sup > 0.0 ? sup : 1.0;
  double momentum = 0.0;
  for (const auto& c : stokes_residual(field, cfg.constants, cfg.lambda)) {
    momentum = std::max(momentum, max_abs_planes(grid, c, 0, grid.ny()));
  }
  const double div = max_abs_planes(grid, divergence(field), 0, grid.ny());

  std::ostringstream fcsv;
  write_field_csv(field, fcsv);
  out.write("field.csv", fcsv.str());
  out.write("modes.csv", modes.str());

  Result r;
  const double field_momentum = momentum / scale, field_div = div / scale;
  r.summary = {{"modes", cfg.modes.size()},
               {"terms", terms.size()},
               {"field_sup", sup},
               {"field_momentum_residual", field_momentum},
               {"field_divergence", field_div},
               {"mode_momentum_residual", worst.momentum},
               {"mode_divergence_residual", worst.divergence},
               {"mode_tangential_residual", worst.tangential},
               {"mode_normal_residual", worst.normal}};
  const double top = std::max({field_momentum, field_div, worst.momentum, worst.divergence, worst.tangential, worst.normal});
  breach_if(r, !(top < cfg.residual_tol));
  r.headline = "solved " + std::to_string(cfg.modes.size()) + " modes, max residual " + num(top);
  return r;
}

Result energy_audit_cmd(const EnergyAuditCfg& cfg, Outputs& out) {
  ClassificationCfg ccfg = cfg.classification;
  ccfg.seed = cfg.seed;
  std::vector<ClassificationVerdict> verdicts(cfg.conditions.size());
  for_each_index(verdicts.size(), Execution::parallel,
                 [&](std::size_t i) { verdicts[i] = classify_bc(cfg.conditions[i], ccfg); });
  Csv cls({"alpha", "beta", "label", "static_class", "empirical_class", "matches", "trials", "max_rel_power_ns",
           "max_power_s_preserved", "max_boundary_defect", "witness_trial", "witness_power_s", "witness_power_s_alt"});
  json verdict_json = json::array();
  int mismatches = 0;
  json witnesses = json::array();
  for (const auto& v : verdicts) {
    cls.row({num(v.bc.alpha), num(v.bc.beta), v.bc.label(), to_string(v.static_class), to_string(v.empirical_class),
             v.matches ? "1" : "0", num(v.trials), num(v.max_rel_power_ns), num(v.max_power_s_preserved),
             num(v.max_boundary_defect), num(v.witness_trial), num(v.witness_power_s), num(v.witness_power_s_alt)});
    mismatches += !v.matches;
    verdict_json.push_back({{"condition", v.bc.name()},
                            {"label", v.bc.label()},
                            {"static", to_string(v.static_class)},
                            {"empirical", to_string(v.empirical_class)},
                            {"matches", v.matches}});
    if (v.witness_trial >= 0) {
      witnesses.push_back({{"condition", v.bc.name()},
                           {"trial", v.witness_trial},
                           {"power_s", v.witness_power_s},
                           {"power_s_alt", v.witness_power_s_alt}});
    }
  }
  out.write("classification.csv", cls.str());

  Result r;
  r.summary = {{"classification", verdict_json}, {"b3_witnesses", witnesses}, {"mismatches", mismatches}};
  breach_if(r, mismatches > 0);
  r.headline = std::to_string(verdicts.size() - mismatches) + "/" + std::to_string(verdicts.size()) +
               " conditions match the static table";

  if (cfg.balance_enabled) {
    const BalanceStudy study = energy_balance_study(cfg.balance);
    Csv bal({"level", "points", "dt", "time", "kinetic", "dissipation_D", "dissipation_R", "forcing_power", "power_s",
             "power_ns", "power_s_alt", "power_ns_alt", "residual_D", "residual_R"});
    for (std::size_t l = 0; l < study.levels.size(); ++l) {
      const BalanceLevel& lv = study.levels[l];
      const auto& snaps = lv.report.snapshots;
      for (std::size_t k = 0; k < snaps.size(); ++k) {
        const bool interior = k > 0 && k + 1 < snaps.size();
        const auto& s = snaps[k];
        bal.row({num(static_cast<int>(l)), num(lv.points), num(lv.dt), num(s.time), num(s.kinetic),
                 num(s.dissipation_D), num(s.dissipation_R), num(s.forcing_power), num(s.powers.power_s),
                 num(s.powers.power_ns), num(s.powers.power_s_alt), num(s.powers.power_ns_alt),
                 interior ? num(lv.report.residual_D[k - 1]) : "", interior ? num(lv.report.residual_R[k - 1]) : ""});
      }
      for (const auto& w : lv.report.warnings) r.warnings.push_back("balance level " + std::to_string(l) + ": " + w);
    }
    out.write("balance.csv", bal.str());
    bool order_ok = true;
    for (double o : study.order_D) order_ok = order_ok && std::abs(o - cfg.order) <= cfg.order_tol;
    for (double o : study.order_R) order_ok = order_ok && std::abs(o - cfg.order) <= cfg.order_tol;
    json residuals = json::array();
    for (const auto& lv : study.levels) {
      residuals.push_back({{"points", lv.points},
                           {"dt", lv.dt},
                           {"max_residual_D", lv.report.max_residual_D},
                           {"max_residual_R", lv.report.max_residual_R}});
    }
    r.summary["balance"] = {
        {"levels", residuals}, {"order_D", study.order_D}, {"order_R", study.order_R}, {"order_ok", order_ok}};
    breach_if(r, !order_ok);
    if (!study.order_D.empty()) {
      r.headline += "; balance order D " + num(study.order_D.back()) + ", R " + num(study.order_R.back());
    }
  }
  return r;
}

Result run_ns_cmd(const RunNsCfg& cfg, Outputs& out) {
  const TensorGrid grid = cfg.grid.make();
  const NsRun run = picard_solve(stream_initial_field(grid, cfg.amplitude), nullptr, cfg.ns);
  Csv csv({"step", "time", "dt", "iterations", "final_gap", "max_ratio", "dt_halvings", "verdict", "kinetic",
           "divergence", "boundary_defect"});
  csv.row({"0", num(run.states.front().time), "", "0", "", "", "0", "", num(run.kinetic[0]), num(run.divergence[0]),
           num(run.boundary_defect[0])});
  double worst_gap = 0.0, worst_rise = 0.0, worst_div = run.divergence[0];
  int max_iters = 0;
  const double e0 = run.kinetic[0];
  for (std::size_t s = 0; s < run.steps.size(); ++s) {
    const IterationReport& st = run.steps[s];
    const double ratio = st.ratios.empty() ? 0.0 : *std::max_element(st.ratios.begin(), st.ratios.end());
    const double gap = st.gaps.empty() ? 0.0 : st.gaps.back();
    csv.row({num(st.step), num(st.time), num(st.dt), num(static_cast<int>(st.gaps.size())), num(gap), num(ratio),
             num(st.dt_halvings), to_string(st.verdict), num(run.kinetic[s + 1]), num(run.divergence[s + 1]),
             num(run.boundary_defect[s + 1])});
    worst_gap = std::max(worst_gap, gap);
    worst_rise = std::max(worst_rise, run.kinetic[s + 1] - run.kinetic[s]);
    worst_div = std::max(worst_div, run.divergence[s + 1]);
    max_iters = std::max(max_iters, static_cast<int>(st.gaps.size()));
  }
  out.write("energy.csv", csv.str());
  std::ostringstream fcsv;
  write_field_csv(run.states.back(), fcsv);
  out.write("field_final.csv", fcsv.str());

  Result r;
  r.warnings = run.warnings;
  const double rel_rise = e0 > 0.0 ? worst_rise / e0 : worst_rise;
  json compat = json::array();
  for (const auto& c : run.compatibility.conditions) {
    compat.push_back({{"name", c.name}, {"applicable", c.applicable}, {"passed", c.passed}, {"defect", c.defect}});
  }
  r.summary = {{"verdict", to_string(run.verdict)},
               {"steps", run.steps.size()},
               {"final_time", run.states.back().time},
               {"max_iterations", max_iters},
               {"max_final_gap", worst_gap},
               {"max_energy_rise_relative", rel_rise},
               {"max_divergence", worst_div},
               {"initial_kinetic", e0},
               {"final_kinetic", run.kinetic.back()},
               {"compatibility", compat}};
  if (run.verdict != IterationVerdict::converged) {
    r.code = kNumericalBudget;
  } else {
    breach_if(r, !(worst_gap < cfg.ns.tol) || rel_rise > cfg.energy_tol || !(worst_div < cfg.divergence_tol));
  }
  r.headline = std::to_string(run.steps.size()) + " steps, verdict " + to_string(run.verdict);
  return r;
}

const char* status_name(int code) {
  switch (code) {
    case kSuccess: return "ok";
    case kToleranceBreach: return "tolerance_breach";
    case kConfigError: return "config_error";
    default: return "numerical_budget";
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + p.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

SampledField stream_initial_field(const TensorGrid& g, double a) {
  SampledField f = zero_field(g);
  const std::size_t plane = g.plane_size();
  const int y = g.n - 1;
  for (int j = 0; j < g.ny(); ++j) {
    const double yy = g.y->nodes()[j];
    const double e = std::exp(-yy);
    for (std::size_t i = 0; i < plane; ++i) {
      const double x = g.x(0, g.unflatten(i)[0]) / g.period_scale;
      f.u[0][j * plane + i] = a * std::sin(x) * (2.0 * yy - yy * yy) * e;
      f.u[y][j * plane + i] = -a / g.period_scale * std::cos(x) * yy * yy * e;
    }
  }
  return f;
}

int run(const Invocation& inv, std::ostream& log) {
  const auto& names = commands();
  if (std::find(names.begin(), names.end(), inv.command) == names.end()) {
    log << "error: unknown command " << inv.command << "\n";
    return kConfigError;
  }
  json config;
  try {
    const json raw = inv.config_path ? parse_config_text(slurp(*inv.config_path)) : json::object();
    config = resolve_config(inv.command, raw, inv.seed);
  } catch (const ConfigError& e) {
    log << "config error: " << (inv.config_path ? inv.config_path->string() + ": " : std::string()) << e.what() << "\n";
    return kConfigError;
  }

  Outputs out(inv.out);
  Result r;
  std::string error;
  try {
    if (inv.command == "verify-symbols") r = verify_symbols_cmd(parse_verify_symbols(config), out);
    if (inv.command == "verify-traces") r = verify_traces_cmd(parse_verify_traces(config), out);
    if (inv.command == "solve") r = solve_cmd(parse_solve(config), out);
    if (inv.command == "energy-audit") r = energy_audit_cmd(parse_energy_audit(config), out);
    if (inv.command == "run-ns") r = run_ns_cmd(parse_run_ns(config), out);
  } catch (const QuadratureBudgetError& e) {
    r.code = kNumericalBudget;
    error = e.what();
  } catch (const IllConditionedError& e) {
    r.code = kNumericalBudget;
    error = e.what();
  } catch (const SingularModeError& e) {
    r.code = kNumericalBudget;
    error = e.what();
  } catch (const DomainError& e) {
    r.code = kConfigError;
    error = e.what();
  } catch (const UnsupportedCaseError& e) {
    r.code = kConfigError;
    error = e.what();
  }

  json manifest = {{"command", inv.command},
                   {"config", config},
                   {"status", status_name(r.code)},
                   {"exit_code", r.code},
                   {"outputs", out.names()},
                   {"summary", r.summary},
                   {"warnings", r.warnings}};
  if (!error.empty()) manifest["error"] = error;
  std::string stem = inv.command;
  std::replace(stem.begin(), stem.end(), '-', '_');
  out.write(stem + ".json", manifest.dump(2) + "\n");

  for (const auto& w : r.warnings) log << "warning: " << w << "\n";
  if (!error.empty()) log << "error: " << error << "\n";
  log << inv.command << ": " << status_name(r.code) << (r.headline.empty() ? "" : " (" + r.headline + ")") << "\n";
  return r.code;
}

}  // namespace hstokes::cli
