// SPDX-License-Identifier: Apache-2.0
#include "hstokes/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>

#include "hstokes/errors.hpp"
#include "hstokes/report.hpp"

namespace hstokes {

void TensorGrid::validate() const {
  if (n < 2 || n > 4) throw DomainError("TensorGrid: dimension must be 2, 3 or 4");
  if (static_cast<int>(nx.size()) != n - 1) throw DomainError("TensorGrid: need n - 1 tangential sizes");
  for (int m : nx) {
    if (m < 2 || m % 2 != 0) throw DomainError("TensorGrid: tangential sizes must be even and >= 2");
  }
  if (!(period_scale > 0.0)) throw DomainError("TensorGrid: period scale must be positive");
  if (!y) throw DomainError("TensorGrid: missing y grid");
}

std::size_t TensorGrid::plane_size() const {
  std::size_t s = 1;
  for (int m : nx) s *= static_cast<std::size_t>(m);
  return s;
}

double TensorGrid::x(int d, int i) const { return 2.0 * std::numbers::pi * period_scale * i / nx[d]; }

std::vector<int> TensorGrid::unflatten(std::size_t flat) const {
  std::vector<int> idx(nx.size());
  for (int d = static_cast<int>(nx.size()) - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % static_cast<std::size_t>(nx[d]));
    flat /= static_cast<std::size_t>(nx[d]);
  }
  return idx;
}

double TensorGrid::wavenumber(int d, int bin) const {
  const int m = bin < nx[d] / 2 ? bin : bin - nx[d];
  return m / period_scale;
}

SampledField zero_field(const TensorGrid& grid) {
  grid.validate();
  SampledField f;
  f.grid = grid;
  f.u.assign(grid.n, std::vector<double>(grid.size(), 0.0));
  f.p.assign(grid.size(), 0.0);
  return f;
}

namespace {

// Plans are created under a lock (the FFTW planner is not thread-safe) and executed through the
// new-array interface, which is. FFTW_ESTIMATE keeps plan choice, and so the bits, reproducible.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::vector<int>, PlanPair>& plan_cache() {
  static std::map<std::vector<int>, PlanPair> cache;
  return cache;
}

const PlanPair& plans_for(const std::vector<int>& dims) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(dims);
  if (it != cache.end()) return it->second;
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  fftw_complex* buf = fftw_alloc_complex(total);
  PlanPair p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.forward = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, FFTW_FORWARD, flags);
  p.backward = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, FFTW_BACKWARD, flags);
  fftw_free(buf);
  return cache.emplace(dims, p).first->second;
}

void run(fftw_plan plan, std::vector<cplx>& data) {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

// Lattice index of xi, or an error for off-lattice / unresolved modes.
std::vector<int> lattice_index(const std::vector<double>& xi, const TensorGrid& g) {
  std::vector<int> m(xi.size());
  for (std::size_t d = 0; d < xi.size(); ++d) {
    const double v = xi[d] * g.period_scale;
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 * std::max(1.0, std::abs(r))) {
      throw DomainError("synthesize_field: mode xi_" + std::to_string(d) + " = " + format_double(xi[d]) +
                        " is not on the lattice m / L");
    }
    m[d] = static_cast<int>(r);
    if (2 * std::abs(m[d]) >= g.nx[d]) {
      throw DomainError("synthesize_field: lattice index " + std::to_string(m[d]) + " not below the Nyquist index of " +
                        std::to_string(g.nx[d]) + " points");
    }
  }
  return m;
}

std::size_t bin_of(const std::vector<int>& m, const TensorGrid& g) {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < m.size(); ++d) {
    const int b = ((m[d] % g.nx[d]) + g.nx[d]) % g.nx[d];
    flat = flat * static_cast<std::size_t>(g.nx[d]) + static_cast<std::size_t>(b);
  }
  return flat;
}

double slowest_profile_rate(const ModeProfile& p) {
  double r = p.pressure.slowest_rate();
  for (int c = 0; c < p.dim(); ++c) r = std::min(r, p.velocity.component(c).slowest_rate());
  return r;
}

}  // namespace

SampledField synthesize_field(const std::vector<FieldTerm>& terms, const TensorGrid& grid, double time, Execution exec) {
  grid.validate();
  const int n = grid.n;
  const double Y = grid.y->length();
  std::map<std::vector<int>, std::vector<std::size_t>> by_index;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const ModeProfile& p = terms[t].profile;
    if (p.dim() != n) throw DomainError("synthesize_field: profile dimension differs from the grid");
    if (slowest_profile_rate(p) * Y < 18.0) {
      throw DomainError("synthesize_field: y extent " + format_double(Y) + " does not resolve the decay rate " +
                        format_double(slowest_profile_rate(p)) + " (need rate * Y >= 18)");
    }
    by_index[lattice_index(p.mode.xi, grid)].push_back(t);
  }

  // Hermitian symmetry of the summed contributions, checked on the grid nodes.
  const auto& ys = grid.y->nodes();
  auto contribution = [&](const std::vector<std::size_t>& list, int comp, double y) {
    cplx acc = 0.0;
    for (std::size_t t : list) {
      const ModeProfile& p = terms[t].profile;
      acc += terms[t].coefficient * (comp < n ? p.velocity.component(comp).value(y) : p.pressure.value(y));
    }
    return acc;
  };
  for (const auto& [m, list] : by_index) {
    std::vector<int> neg(m.size());
    for (std::size_t d = 0; d < m.size(); ++d) neg[d] = -m[d];
    auto partner = by_index.find(neg);
    if (partner == by_index.end()) {
      throw IncompatibleDataError("synthesize_field: missing conjugate partner for lattice index " +
                                  std::to_string(m.empty() ? 0 : m[0]) + (m.size() > 1 ? ",..." : ""));
    }
    for (double y : ys) {
      for (int c = 0; c <= n; ++c) {
        const cplx a = contribution(list, c, y);
        const cplx b = contribution(partner->second, c, y);
        if (std::abs(a - std::conj(b)) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
          throw IncompatibleDataError("synthesize_field: mode set is not conjugate symmetric (field would be complex)");
        }
      }
    }
  }

  SampledField out = zero_field(grid);
  out.time = time;
  const std::size_t plane = grid.plane_size();
  const PlanPair& plans = plans_for(grid.nx);
  for_each_index(static_cast<std::size_t>(grid.ny()), exec, [&](std::size_t j) {
    const double y = ys[j];
    std::vector<cplx> buf(plane);
    for (int c = 0; c <= n; ++c) {
      std::fill(buf.begin(), buf.end(), cplx(0.0));
      for (const auto& [m, list] : by_index) buf[bin_of(m, grid)] += contribution(list, c, y);
      run(plans.backward, buf);
      std::vector<double>& dst = c < n ? out.u[c] : out.p;
      for (std::size_t i = 0; i < plane; ++i) dst[j * plane + i] = buf[i].real();
    }
  });
  return out;
}

std::vector<std::vector<cplx>> mode_coefficients(const TensorGrid& grid, const std::vector<double>& f) {
  grid.validate();
  if (f.size() != grid.size()) throw DomainError("mode_coefficients: sample count differs from the grid");
  const std::size_t plane = grid.plane_size();
  const PlanPair& plans = plans_for(grid.nx);
  std::vector<std::vector<cplx>> out(plane, std::vector<cplx>(static_cast<std::size_t>(grid.ny())));
  std::vector<cplx> buf(plane);
  for (int j = 0; j < grid.ny(); ++j) {
    for (std::size_t i = 0; i < plane; ++i) buf[i] = f[j * plane + i];
    run(plans.forward, buf);
    for (std::size_t i = 0; i < plane; ++i) out[i][j] = buf[i] / static_cast<double>(plane);
  }
  return out;
}

std::vector<double> synthesize_from_modes(const TensorGrid& grid, const std::vector<std::vector<cplx>>& c) {
  grid.validate();
  const std::size_t plane = grid.plane_size();
  if (c.size() != plane) throw DomainError("synthesize_from_modes: need one coefficient row per bin");
  const PlanPair& plans = plans_for(grid.nx);
  std::vector<double> out(grid.size());
  std::vector<cplx> buf(plane);
  for (int j = 0; j < grid.ny(); ++j) {
    for (std::size_t i = 0; i < plane; ++i) buf[i] = c[i][j];
    run(plans.backward, buf);
    for (std::size_t i = 0; i < plane; ++i) out[j * plane + i] = buf[i].real();
  }
  return out;
}

std::vector<double> derivative_x(const TensorGrid& grid, const std::vector<double>& f, int d, int order) {
  grid.validate();
  if (d < 0 || d >= grid.n - 1) throw DomainError("derivative_x: direction out of range");
  if (order < 0) throw DomainError("derivative_x: negative order");
  const std::size_t plane = grid.plane_size();
  const PlanPair& plans = plans_for(grid.nx);
  std::vector<cplx> factor(plane);
  for (std::size_t i = 0; i < plane; ++i) {
    const int bin = grid.unflatten(i)[d];
    if (order % 2 == 1 && 2 * bin == grid.nx[d]) {
      factor[i] = 0.0;
    } else {
      factor[i] = std::pow(kI * grid.wavenumber(d, bin), order) / static_cast<double>(plane);
    }
  }
  std::vector<double> out(f.size());
  std::vector<cplx> buf(plane);
  for (int j = 0; j < grid.ny(); ++j) {
    for (std::size_t i = 0; i < plane; ++i) buf[i] = f[j * plane + i];
    run(plans.forward, buf);
    for (std::size_t i = 0; i < plane; ++i) buf[i] *= factor[i];
    run(plans.backward, buf);
    for (std::size_t i = 0; i < plane; ++i) out[j * plane + i] = buf[i].real();
  }
  return out;
}

std::vector<double> derivative_y(const TensorGrid& grid, const std::vector<double>& f, int order) {
  grid.validate();
  if (order != 1 && order != 2) throw DomainError("derivative_y: order must be 1 or 2");
  const std::size_t plane = grid.plane_size();
  const YGrid& yg = *grid.y;
  std::vector<double> out(f.size(), 0.0);
  for (int j = 0; j < yg.size(); ++j) {
    const Stencil& s = order == 1 ? yg.d1(j) : yg.d2(j);
    for (std::size_t k = 0; k < s.weights.size(); ++k) {
      const double w = s.weights[k];
      const std::size_t src = static_cast<std::size_t>(s.start + static_cast<int>(k)) * plane;
      for (std::size_t i = 0; i < plane; ++i) out[j * plane + i] += w * f[src + i];
    }
  }
  return out;
}

std::vector<double> divergence(const SampledField& field) {
  const TensorGrid& g = field.grid;
  std::vector<double> div = derivative_y(g, field.u[g.n - 1]);
  for (int d = 0; d < g.n - 1; ++d) {
    const std::vector<double> dd = derivative_x(g, field.u[d], d);
    for (std::size_t i = 0; i < div.size(); ++i) div[i] += dd[i];
  }
  return div;
}

std::vector<std::vector<double>> stokes_residual(const SampledField& field, const FluidConstants& c, double lambda,
                                                 const SampledField* force) {
  c.validate();
  if (!(lambda >= 0.0)) throw DomainError("stokes_residual: lambda must be real and >= 0");
  const TensorGrid& g = field.grid;
  const double shift = c.rho * (c.epsilon + lambda);
  std::vector<std::vector<double>> res(g.n);
  for (int comp = 0; comp < g.n; ++comp) {
    const std::vector<double>& u = field.u[comp];
    std::vector<double> lap = derivative_y(g, u, 2);
    for (int d = 0; d < g.n - 1; ++d) {
      const std::vector<double> dd = derivative_x(g, u, d, 2);
      for (std::size_t i = 0; i < lap.size(); ++i) lap[i] += dd[i];
    }
    const std::vector<double> gp = comp < g.n - 1 ? derivative_x(g, field.p, comp) : derivative_y(g, field.p);
    res[comp].resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      res[comp][i] = shift * u[i] - c.mu * lap[i] + gp[i] - (force ? c.rho * force->u[comp][i] : 0.0);
    }
  }
  return res;
}

double max_abs_planes(const TensorGrid& grid, const std::vector<double>& v, int first, int last) {
  const std::size_t plane = grid.plane_size();
  double m = 0.0;
  for (int j = std::max(0, first); j < std::min(last, grid.ny()); ++j) {
    for (std::size_t i = 0; i < plane; ++i) m = std::max(m, std::abs(v[j * plane + i]));
  }
  return m;
}

void write_field_csv(const SampledField& field, std::ostream& out) {
  const TensorGrid& g = field.grid;
  const int t = g.n - 1;
  for (int d = 0; d < t; ++d) out << "x" << d << ",";
  out << "y";
  for (int c = 0; c < g.n; ++c) out << ",u" << c;
  out << ",p\n";
  const std::size_t plane = g.plane_size();
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (int j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < plane; ++i) {
      const std::vector<int> idx = g.unflatten(i);
      for (int d = 0; d < t; ++d) {
        put(g.x(d, idx[d]));
        out << ',';
      }
      put(g.y->nodes()[j]);
      const std::size_t k = j * plane + i;
      for (int c = 0; c < g.n; ++c) {
        out << ',';
        put(field.u[c][k]);
      }
      out << ',';
      put(field.p[k]);
      out << '\n';
    }
  }
}

}  // namespace hstokes
