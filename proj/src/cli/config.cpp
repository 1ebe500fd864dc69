// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <set>

#include "campaigns.hpp"
#include "hstokes/errors.hpp"

namespace hstokes::cli {

namespace {

// Reader over one JSON object: typed lookups with defaults, and rejection of keys never looked up.
class Node {
 public:
  Node(const json* j, std::string path) : j_(j), path_(std::move(path)) {
    if (j_ && !j_->is_object()) fail("", "expected an object");
  }

  std::string at(const std::string& key) const { return path_ + "/" + key; }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    const std::string p = key.empty() ? path_ : at(key);
    throw ConfigError((p.empty() ? "/" : p) + ": " + msg);
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    if (!j_) return nullptr;
    auto it = j_->find(key);
    return it == j_->end() ? nullptr : &*it;
  }

  double number(const std::string& key, double def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_number()) fail(key, "expected a number");
    return v->get<double>();
  }

  double positive(const std::string& key, double def) {
    const double v = number(key, def);
    if (!(v > 0.0) || !std::isfinite(v)) fail(key, "must be positive and finite");
    return v;
  }

  int integer(const std::string& key, int def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_number_integer()) fail(key, "expected an integer");
    return v->get<int>();
  }

  std::uint64_t seed(const std::string& key, std::uint64_t def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_number_unsigned()) fail(key, "expected a nonnegative integer");
    return v->get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_boolean()) fail(key, "expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_string()) fail(key, "expected a string");
    return v->get<std::string>();
  }

  cplx complex(const std::string& key, cplx def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
      fail(key, "expected [re, im]");
    }
    return {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }

  template <class T>
  std::vector<T> list(const std::string& key, const std::vector<T>& def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_array()) fail(key, "expected an array");
    std::vector<T> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& e = (*v)[i];
      const std::string where = key + "/" + std::to_string(i);
      if constexpr (std::is_same_v<T, int>) {
        if (!e.is_number_integer()) fail(where, "expected an integer");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!e.is_string()) fail(where, "expected a string");
      } else {
        if (!e.is_number()) fail(where, "expected a number");
      }
      out.push_back(e.get<T>());
    }
    return out;
  }

  Node child(const std::string& key) { return Node(find(key), at(key)); }

  void done() const {
    if (!j_) return;
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      if (!seen_.count(it.key())) fail(it.key(), "unknown key");
    }
  }

 private:
  const json* j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
void checked(const Node& n, const std::string& key, F&& validate) {
  try {
    validate();
  } catch (const DomainError& e) {
    n.fail(key, e.what());
  }
}

FluidConstants read_constants(Node n, const FluidConstants& def) {
  FluidConstants c;
  c.rho = n.positive("rho", def.rho);
  c.mu = n.positive("mu", def.mu);
  c.epsilon = n.positive("epsilon", def.epsilon);
  n.done();
  return c;
}

json constants_json(const FluidConstants& c) { return {{"rho", c.rho}, {"mu", c.mu}, {"epsilon", c.epsilon}}; }

BcSpec read_bc(Node n, const BcSpec& def) {
  const int a = n.integer("alpha", def.alpha);
  const int b = n.integer("beta", def.beta);
  if (std::abs(a) > 1) n.fail("alpha", "must be -1, 0 or 1");
  if (std::abs(b) > 1) n.fail("beta", "must be -1, 0 or 1");
  n.done();
  return BcSpec(a, b);
}

json bc_json(const BcSpec& bc) { return {{"alpha", bc.alpha}, {"beta", bc.beta}}; }

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

ModeSampleCfg read_sampling(Node n) {
  ModeSampleCfg s;
  s.xi_min = n.positive("xi_min", s.xi_min);
  s.xi_max = n.positive("xi_max", s.xi_max);
  if (s.xi_max < s.xi_min) n.fail("xi_max", "must be >= xi_min");
  s.lambda_im_max = n.number("lambda_im_max", s.lambda_im_max);
  if (!(s.lambda_im_max >= 0.0) || !std::isfinite(s.lambda_im_max)) n.fail("lambda_im_max", "must be >= 0");
  s.epsilons = n.list<double>("epsilons", s.epsilons);
  if (s.epsilons.empty()) n.fail("epsilons", "must not be empty");
  for (double e : s.epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) n.fail("epsilons", "entries must be positive");
  }
  s.rho_min = n.positive("rho_min", s.rho_min);
  s.rho_max = n.positive("rho_max", s.rho_max);
  if (s.rho_max < s.rho_min) n.fail("rho_max", "must be >= rho_min");
  s.mu_min = n.positive("mu_min", s.mu_min);
  s.mu_max = n.positive("mu_max", s.mu_max);
  if (s.mu_max < s.mu_min) n.fail("mu_max", "must be >= mu_min");
  s.dims = n.list<int>("dims", s.dims);
  if (s.dims.empty()) n.fail("dims", "must not be empty");
  for (int d : s.dims) {
    if (d < 2 || d > 4) n.fail("dims", "entries must be 2, 3 or 4");
  }
  n.done();
  return s;
}

json sampling_json(const ModeSampleCfg& s) {
  return {{"xi_min", s.xi_min},   {"xi_max", s.xi_max},   {"lambda_im_max", s.lambda_im_max},
          {"epsilons", s.epsilons}, {"rho_min", s.rho_min}, {"rho_max", s.rho_max},
          {"mu_min", s.mu_min},   {"mu_max", s.mu_max},   {"dims", s.dims}};
}

YGridCfg read_ygrid(Node n, const YGridCfg& def) {
  YGridCfg y;
  y.kind = n.string("kind", def.kind);
  if (y.kind != "graded" && y.kind != "uniform") n.fail("kind", "must be \"graded\" or \"uniform\"");
  y.points = n.integer("points", def.points);
  if (y.points < 7) n.fail("points", "must be at least 7");
  y.length = n.positive("length", def.length);
  y.stretch = n.number("stretch", def.stretch);
  if (!(y.stretch >= 1.0) || !std::isfinite(y.stretch)) n.fail("stretch", "must be >= 1");
  n.done();
  return y;
}

json ygrid_json(const YGridCfg& y) {
  return {{"kind", y.kind}, {"points", y.points}, {"length", y.length}, {"stretch", y.stretch}};
}

StripCfg read_strip(Node n, const StripCfg& def) {
  StripCfg s;
  s.period_scale = n.positive("period_scale", def.period_scale);
  s.nx = n.list<int>("nx", def.nx);
  if (s.nx.empty() || s.nx.size() > 3) n.fail("nx", "needs 1 to 3 tangential sizes");
  for (int m : s.nx) {
    if (m < 2 || m % 2 != 0) n.fail("nx", "sizes must be even and >= 2");
  }
  s.y = read_ygrid(n.child("y"), def.y);
  n.done();
  return s;
}

json strip_json(const StripCfg& s) { return {{"period_scale", s.period_scale}, {"nx", s.nx}, {"y", ygrid_json(s.y)}}; }

int count(Node& n, const std::string& key, int def) {
  const int v = n.integer(key, def);
  if (v < 1) n.fail(key, "must be at least 1");
  return v;
}

}  // namespace

YGridPtr YGridCfg::make() const {
  return kind == "uniform" ? YGrid::uniform(points, length) : YGrid::graded(points, length, stretch);
}

TensorGrid StripCfg::make() const {
  TensorGrid g;
  g.n = static_cast<int>(nx.size()) + 1;
  g.period_scale = period_scale;
  g.nx = nx;
  g.y = y.make();
  return g;
}

VerifySymbolsCfg parse_verify_symbols(const json& raw) {
  Node n(&raw, "");
  VerifySymbolsCfg c;
  c.seed = n.seed("seed", c.seed);
  c.modes = count(n, "modes", c.modes);
  c.sampling = read_sampling(n.child("sampling"));
  Node t = n.child("tolerances");
  auto& tol = c.tolerances;
  tol.omega_identity = t.positive("omega_identity", tol.omega_identity);
  tol.inverse_identity = t.positive("inverse_identity", tol.inverse_identity);
  tol.generic_inverse = t.positive("generic_inverse", tol.generic_inverse);
  tol.factorization = t.positive("factorization", tol.factorization);
  tol.multiplier = t.positive("multiplier", tol.multiplier);
  t.done();
  n.done();
  return c;
}

json to_json(const VerifySymbolsCfg& c) {
  const auto& t = c.tolerances;
  return {{"seed", c.seed},
          {"modes", c.modes},
          {"sampling", sampling_json(c.sampling)},
          {"tolerances",
           {{"omega_identity", t.omega_identity},
            {"inverse_identity", t.inverse_identity},
            {"generic_inverse", t.generic_inverse},
            {"factorization", t.factorization},
            {"multiplier", t.multiplier}}}};
}

VerifyTracesCfg parse_verify_traces(const json& raw) {
  Node n(&raw, "");
  VerifyTracesCfg c;
  c.seed = n.seed("seed", c.seed);
  c.modes = count(n, "modes", c.modes);
  c.sampling = read_sampling(n.child("sampling"));
  Node q = n.child("quadrature");
  c.quadrature.rel_tol = q.positive("rel_tol", c.quadrature.rel_tol);
  c.quadrature.truncation_multiplier = q.positive("truncation_multiplier", c.quadrature.truncation_multiplier);
  c.quadrature.max_subdivisions = q.integer("max_subdivisions", c.quadrature.max_subdivisions);
  if (c.quadrature.max_subdivisions < 0) q.fail("max_subdivisions", "must be >= 0");
  q.done();
  c.tolerance = n.positive("tolerance", c.tolerance);
  c.relations = n.list<std::string>("relations", c.relations);
  if (c.relations.empty()) n.fail("relations", "must not be empty");
  std::set<std::string> seen;
  for (const auto& r : c.relations) {
    if (r != "T00" && r != "T10" && r != "T11") n.fail("relations", "entries must be T00, T10 or T11");
    if (!seen.insert(r).second) n.fail("relations", "duplicate entry " + r);
  }
  n.done();
  return c;
}

json to_json(const VerifyTracesCfg& c) {
  return {{"seed", c.seed},
          {"modes", c.modes},
          {"sampling", sampling_json(c.sampling)},
          {"quadrature",
           {{"rel_tol", c.quadrature.rel_tol},
            {"truncation_multiplier", c.quadrature.truncation_multiplier},
            {"max_subdivisions", c.quadrature.max_subdivisions}}},
          {"tolerance", c.tolerance},
          {"relations", c.relations}};
}

SolveCfg parse_solve(const json& raw) {
  Node n(&raw, "");
  SolveCfg c;
  c.seed = n.seed("seed", c.seed);
  c.constants = read_constants(n.child("constants"), c.constants);
  c.bc = read_bc(n.child("bc"), c.bc);
  c.lambda = n.number("lambda", c.lambda);
  if (!std::isfinite(c.lambda) || c.constants.epsilon + c.lambda <= 0.0) {
    n.fail("lambda", "epsilon + lambda must be positive");
  }
  c.grid = read_strip(n.child("grid"), c.grid);
  c.residual_tol = n.positive("residual_tol", c.residual_tol);
  const json* modes = n.find("modes");
  if (modes) {
    if (!modes->is_array()) n.fail("modes", "expected an array");
    std::set<std::vector<int>> used;
    for (std::size_t i = 0; i < modes->size(); ++i) {
      Node e(&(*modes)[i], n.at("modes") + "/" + std::to_string(i));
      SolveMode m;
      m.m = e.list<int>("m", {});
      m.h_w = e.complex("h_w", m.h_w);
      e.done();
      if (m.m.size() != c.grid.nx.size()) e.fail("m", "needs one integer per tangential direction");
      bool zero = true;
      std::vector<int> neg;
      for (std::size_t d = 0; d < m.m.size(); ++d) {
        zero = zero && m.m[d] == 0;
        if (2 * std::abs(m.m[d]) >= c.grid.nx[d]) e.fail("m", "must lie strictly below the Nyquist bin of the grid");
        neg.push_back(-m.m[d]);
      }
      if (zero) e.fail("m", "the zero mode has no Stokes solution; use a nonzero wavenumber");
      if (used.count(m.m) || used.count(neg)) e.fail("m", "duplicate mode (conjugate partners are added automatically)");
      used.insert(m.m);
      c.modes.push_back(m);
    }
  }
  n.done();
  return c;
}

json to_json(const SolveCfg& c) {
  json modes = json::array();
  for (const auto& m : c.modes) modes.push_back({{"m", m.m}, {"h_w", complex_json(m.h_w)}});
  return {{"seed", c.seed},
          {"constants", constants_json(c.constants)},
          {"bc", bc_json(c.bc)},
          {"lambda", c.lambda},
          {"grid", strip_json(c.grid)},
          {"residual_tol", c.residual_tol},
          {"modes", modes}};
}

EnergyAuditCfg parse_energy_audit(const json& raw) {
  Node n(&raw, "");
  EnergyAuditCfg c;
  c.seed = n.seed("seed", c.seed);
  Node k = n.child("classification");
  auto& cl = c.classification;
  cl.trials = count(k, "trials", cl.trials);
  cl.modes = count(k, "modes", cl.modes);
  cl.nx = k.integer("nx", cl.nx);
  if (cl.nx < 4 || cl.nx % 2 != 0) k.fail("nx", "must be even and at least 4");
  if (2 * cl.modes > cl.nx) k.fail("modes", "needs nx >= 2 * modes");
  cl.constants = read_constants(k.child("constants"), cl.constants);
  cl.vanish_tol = k.positive("vanish_tol", cl.vanish_tol);
  cl.witness_tol = k.positive("witness_tol", cl.witness_tol);
  const json* conds = k.find("conditions");
  if (conds) {
    if (!conds->is_array() || conds->empty()) k.fail("conditions", "expected a nonempty array");
    c.conditions.clear();
    for (std::size_t i = 0; i < conds->size(); ++i) {
      const BcSpec bc = read_bc(Node(&(*conds)[i], k.at("conditions") + "/" + std::to_string(i)), BcSpec(0, 0));
      for (const auto& o : c.conditions) {
        if (o == bc) k.fail("conditions", "duplicate condition " + bc.name());
      }
      c.conditions.push_back(bc);
    }
  }
  k.done();

  Node b = n.child("balance");
  auto& bs = c.balance;
  c.balance_enabled = b.boolean("enabled", c.balance_enabled);
  bs.bc = read_bc(b.child("bc"), bs.bc);
  bs.constants = read_constants(b.child("constants"), bs.constants);
  bs.lambda = b.complex("lambda", bs.lambda);
  bs.xi = b.positive("xi", bs.xi);
  bs.h_w = b.complex("h_w", bs.h_w);
  bs.nx = b.integer("nx", bs.nx);
  const YGridCfg y = read_ygrid(b.child("y"), {"graded", bs.points, bs.length, bs.stretch});
  if (y.kind != "graded") b.fail("y", "the balance study refines a graded grid");
  bs.points = y.points;
  bs.length = y.length;
  bs.stretch = y.stretch;
  bs.t0 = b.number("t0", bs.t0);
  bs.dt = b.positive("dt", bs.dt);
  bs.levels = count(b, "levels", bs.levels);
  c.order = b.number("order", c.order);
  c.order_tol = b.positive("order_tol", c.order_tol);
  checked(b, "", [&] { bs.validate(); });
  b.done();
  n.done();
  c.classification.seed = c.seed;
  return c;
}

json to_json(const EnergyAuditCfg& c) {
  const auto& cl = c.classification;
  const auto& bs = c.balance;
  json conds = json::array();
  for (const auto& bc : c.conditions) conds.push_back(bc_json(bc));
  return {{"seed", c.seed},
          {"classification",
           {{"trials", cl.trials},
            {"modes", cl.modes},
            {"nx", cl.nx},
            {"constants", constants_json(cl.constants)},
            {"vanish_tol", cl.vanish_tol},
            {"witness_tol", cl.witness_tol},
            {"conditions", conds}}},
          {"balance",
           {{"enabled", c.balance_enabled},
            {"bc", bc_json(bs.bc)},
            {"constants", constants_json(bs.constants)},
            {"lambda", complex_json(bs.lambda)},
            {"xi", bs.xi},
            {"h_w", complex_json(bs.h_w)},
            {"nx", bs.nx},
            {"y", ygrid_json({"graded", bs.points, bs.length, bs.stretch})},
            {"t0", bs.t0},
            {"dt", bs.dt},
            {"levels", bs.levels},
            {"order", c.order},
            {"order_tol", c.order_tol}}}};
}

RunNsCfg parse_run_ns(const json& raw) {
  Node n(&raw, "");
  RunNsCfg c;
  auto& ns = c.ns;
  c.seed = n.seed("seed", c.seed);
  ns.constants = read_constants(n.child("constants"), ns.constants);
  ns.bc = read_bc(n.child("bc"), ns.bc);
  ns.dt = n.positive("dt", ns.dt);
  ns.dt_min = n.positive("dt_min", ns.dt_min);
  if (ns.dt < ns.dt_min) n.fail("dt", "must be >= dt_min");
  ns.horizon = n.number("horizon", ns.horizon);
  if (!(ns.horizon >= 0.0) || !std::isfinite(ns.horizon)) n.fail("horizon", "must be >= 0");
  ns.tol = n.positive("tol", ns.tol);
  ns.max_iter = count(n, "max_iter", ns.max_iter);
  ns.growth_limit = count(n, "growth_limit", ns.growth_limit);
  ns.nonlinear = n.boolean("nonlinear", ns.nonlinear);
  ns.p_exponent = n.positive("p_exponent", ns.p_exponent);
  c.grid = read_strip(n.child("grid"), c.grid);
  Node init = n.child("initial");
  c.amplitude = init.number("amplitude", c.amplitude);
  if (!std::isfinite(c.amplitude)) init.fail("amplitude", "must be finite");
  init.done();
  c.energy_tol = n.positive("energy_tol", c.energy_tol);
  c.divergence_tol = n.positive("divergence_tol", c.divergence_tol);
  n.done();
  return c;
}

json to_json(const RunNsCfg& c) {
  const auto& ns = c.ns;
  return {{"seed", c.seed},
          {"constants", constants_json(ns.constants)},
          {"bc", bc_json(ns.bc)},
          {"dt", ns.dt},
          {"dt_min", ns.dt_min},
          {"horizon", ns.horizon},
          {"tol", ns.tol},
          {"max_iter", ns.max_iter},
          {"growth_limit", ns.growth_limit},
          {"nonlinear", ns.nonlinear},
          {"p_exponent", ns.p_exponent},
          {"grid", strip_json(c.grid)},
          {"initial", {{"amplitude", c.amplitude}}},
          {"energy_tol", c.energy_tol},
          {"divergence_tol", c.divergence_tol}};
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"verify-symbols", "verify-traces", "solve", "energy-audit", "run-ns"};
  return names;
}

json parse_config_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

json resolve_config(const std::string& command, const json& raw, std::optional<std::uint64_t> seed) {
  auto finish = [&](auto c) {
    if (seed) c.seed = *seed;
    return to_json(c);
  };
  if (command == "verify-symbols") return finish(parse_verify_symbols(raw));
  if (command == "verify-traces") return finish(parse_verify_traces(raw));
  if (command == "solve") return finish(parse_solve(raw));
  if (command == "energy-audit") return finish(parse_energy_audit(raw));
  if (command == "run-ns") return finish(parse_run_ns(raw));
  throw ConfigError("unknown command " + command);
}

std::optional<int> resolve_jobs(std::optional<int> flag, const char* env) {
  if (flag) {
    if (*flag < 1) throw ConfigError("--jobs must be at least 1");
    return flag;
  }
  if (!env || !*env) return std::nullopt;
  const std::string s(env);
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 1) throw ConfigError("HSTOKES_JOBS must be a positive integer, got \"" + s + "\"");
  return v;
}

}  // namespace hstokes::cli
