// SPDX-License-Identifier: Apache-2.0
#include "hstokes/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hstokes/errors.hpp"
#include "hstokes/quadrature.hpp"

namespace hstokes {

std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

// ---------------------------------------------------------------- YGrid

namespace {

constexpr int kInterpPoints = 6;

int clamp_start(int want, int m, int width) { return std::clamp(want, 0, m - width); }

Stencil make_stencil(const std::vector<double>& y, int i, int start, int width, int order) {
  std::vector<double> sub(y.begin() + start, y.begin() + start + width);
  auto w = fornberg_weights(y[i], sub, order);
  return Stencil{start, w[order]};
}

}  // namespace

YGrid::YGrid(std::vector<double> nodes, double stretch) : y_(std::move(nodes)), stretch_(stretch) {
  const int m = size();
  d1_.reserve(m);
  d2_.reserve(m);
  d1_low_.reserve(m);
  for (int i = 0; i < m; ++i) {
    d1_.push_back(make_stencil(y_, i, clamp_start(i - 2, m, 5), 5, 1));
    d2_.push_back(make_stencil(y_, i, clamp_start(i - 2, m, 6), 6, 2));
    d1_low_.push_back(make_stencil(y_, i, clamp_start(i - 1, m, 3), 3, 1));
  }
  quad_.assign(m, 0.0);
  const UnitRule& gl = gauss_legendre_unit(4);
  for (int k = 0; k + 1 < m; ++k) {
    const int start = clamp_start(k - 1, m, 4);
    std::vector<double> sub(y_.begin() + start, y_.begin() + start + 4);
    const double h = y_[k + 1] - y_[k];
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const auto w = fornberg_weights(y_[k] + h * gl.nodes[q], sub, 0);
      for (int j = 0; j < 4; ++j) quad_[start + j] += h * gl.weights[q] * w[0][j];
    }
  }
}

std::shared_ptr<const YGrid> YGrid::graded(int points, double length, double stretch) {
  if (points < 7) throw DomainError("YGrid: need at least 7 points");
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("YGrid: length must be positive");
  if (!(stretch >= 1.0) || !std::isfinite(stretch)) throw DomainError("YGrid: stretch must be >= 1");
  const int n = points - 1;
  std::vector<double> y(points);
  if (stretch == 1.0) {
    for (int j = 0; j <= n; ++j) y[j] = length * static_cast<double>(j) / n;
  } else {
    const double lq = std::log(stretch);
    const double den = std::expm1(n * lq);
    for (int j = 0; j <= n; ++j) y[j] = length * std::expm1(j * lq) / den;
  }
  y[0] = 0.0;
  y[n] = length;
  return std::shared_ptr<const YGrid>(new YGrid(std::move(y), stretch));
}

std::shared_ptr<const YGrid> YGrid::uniform(int points, double length) { return graded(points, length, 1.0); }

std::shared_ptr<const YGrid> YGrid::refined() const {
  return graded(2 * (size() - 1) + 1, length(), std::sqrt(stretch_));
}

int YGrid::locate(double y) const {
  if (y < 0.0) throw DomainError("YGrid::locate: negative y");
  if (y > y_.back()) return -1;
  auto it = std::upper_bound(y_.begin(), y_.end(), y);
  int k = static_cast<int>(it - y_.begin()) - 1;
  return std::min(k, size() - 2);
}

int YGrid::interpolation_start(int k) const { return clamp_start(k - 2, size(), kInterpPoints); }

// ---------------------------------------------------------------- ScalarModeProfile

namespace {

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// d^order/dy^order of y^m e^{-r y}
cplx term_derivative(int m, cplx r, double y, int order) {
  const cplx e = std::exp(-r * y);
  cplx acc = 0.0;
  for (int j = 0; j <= std::min(order, m); ++j) {
    const double falling = factorial(m) / factorial(m - j);
    const double ypow = (m - j == 0) ? 1.0 : std::pow(y, m - j);
    acc += binomial(order, j) * falling * ypow * std::pow(-r, order - j);
  }
  return acc * e;
}

bool same_grid(const YGridPtr& a, const YGridPtr& b) { return a == b || a->same_nodes(*b); }

// Interpolate (or differentiate) table values at y using the six-point stencil.
cplx table_eval(const YGrid& g, const std::vector<cplx>& v, double y, int order) {
  const int k = g.locate(y);
  if (k < 0) return 0.0;
  const auto& nodes = g.nodes();
  if (order == 0) {
    if (y == nodes[k]) return v[k];
    if (y == nodes[k + 1]) return v[k + 1];
  }
  const int start = g.interpolation_start(k);
  std::vector<double> sub(nodes.begin() + start, nodes.begin() + start + kInterpPoints);
  const auto w = fornberg_weights(y, sub, order);
  cplx acc = 0.0;
  for (int j = 0; j < kInterpPoints; ++j) acc += w[order][j] * v[start + j];
  return acc;
}

std::vector<cplx> table_node_derivative(const ProfileTable& t) {
  if (!t.derivatives.empty()) return t.derivatives;
  const YGrid& g = *t.grid;
  std::vector<cplx> d(t.values.size());
  for (int i = 0; i < g.size(); ++i) {
    const Stencil& s = g.d1(i);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < s.weights.size(); ++j) acc += s.weights[j] * t.values[s.start + j];
    d[i] = acc;
  }
  return d;
}

}  // namespace

ScalarModeProfile::ScalarModeProfile(std::vector<ExpTerm> terms) : terms_(std::move(terms)) { merge_terms(); }

ScalarModeProfile ScalarModeProfile::exponential(cplx amplitude, cplx rate, int power) {
  if (power < 0) throw DomainError("exponential term power must be nonnegative");
  return ScalarModeProfile({ExpTerm{amplitude, power, rate}});
}

ScalarModeProfile ScalarModeProfile::tabulated(YGridPtr grid, std::vector<cplx> values,
                                               std::vector<cplx> derivatives) {
  if (!grid) throw DomainError("tabulated profile needs a grid");
  if (static_cast<int>(values.size()) != grid->size()) throw DomainError("tabulated profile: size mismatch");
  if (!derivatives.empty() && derivatives.size() != values.size()) {
    throw DomainError("tabulated profile: derivative size mismatch");
  }
  ScalarModeProfile p;
  p.table_ = ProfileTable{std::move(grid), std::move(values), std::move(derivatives)};
  return p;
}

bool ScalarModeProfile::is_zero() const {
  if (!terms_.empty()) return false;
  if (!table_) return true;
  return std::all_of(table_->values.begin(), table_->values.end(), [](cplx v) { return v == 0.0; });
}

void ScalarModeProfile::merge_terms() {
  std::vector<ExpTerm> out;
  for (const ExpTerm& t : terms_) {
    if (t.amplitude == 0.0) continue;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const ExpTerm& o) { return o.power == t.power && o.rate == t.rate; });
    if (it == out.end()) {
      out.push_back(t);
    } else {
      it->amplitude += t.amplitude;
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const ExpTerm& t) { return t.amplitude == 0.0; }), out.end());
  terms_ = std::move(out);
}

cplx ScalarModeProfile::closed_value(double y, int order) const {
  cplx acc = 0.0;
  for (const ExpTerm& t : terms_) acc += t.amplitude * term_derivative(t.power, t.rate, y, order);
  return acc;
}

double ScalarModeProfile::magnitude(double y, int order) const {
  double acc = 0.0;
  for (const ExpTerm& t : terms_) acc += std::abs(t.amplitude * term_derivative(t.power, t.rate, y, order));
  if (table_) {
    acc += std::abs(order == 0 ? table_eval(*table_->grid, table_->values, y, 0)
                               : (table_->derivatives.empty() ? table_eval(*table_->grid, table_->values, y, 1)
                                                              : table_eval(*table_->grid, table_->derivatives, y, 0)));
  }
  return acc;
}

cplx ScalarModeProfile::value(double y) const {
  cplx v = closed_value(y, 0);
  if (table_) v += table_eval(*table_->grid, table_->values, y, 0);
  return v;
}

cplx ScalarModeProfile::derivative(double y) const { return derivative(y, 1); }

cplx ScalarModeProfile::derivative(double y, int order) const {
  if (order == 0) return value(y);
  cplx v = closed_value(y, order);
  if (table_) {
    if (order > 1) throw DomainError("higher derivatives of tabulated profiles are not available");
    if (!table_->derivatives.empty()) {
      v += table_eval(*table_->grid, table_->derivatives, y, 0);
    } else {
      v += table_eval(*table_->grid, table_->values, y, 1);
    }
  }
  return v;
}

std::vector<cplx> ScalarModeProfile::sample(const YGrid& grid) const {
  std::vector<cplx> out(grid.size());
  const auto& y = grid.nodes();
  for (int i = 0; i < grid.size(); ++i) out[i] = closed_value(y[i], 0);
  if (table_) {
    if (!table_->grid->same_nodes(grid)) throw DomainError("sample: table lives on a different grid");
    for (int i = 0; i < grid.size(); ++i) out[i] += table_->values[i];
  }
  return out;
}

std::vector<cplx> ScalarModeProfile::sample_derivative(const YGrid& grid) const {
  std::vector<cplx> out(grid.size());
  const auto& y = grid.nodes();
  for (int i = 0; i < grid.size(); ++i) out[i] = closed_value(y[i], 1);
  if (table_) {
    if (!table_->grid->same_nodes(grid)) throw DomainError("sample: table lives on a different grid");
    const auto d = table_node_derivative(*table_);
    for (int i = 0; i < grid.size(); ++i) out[i] += d[i];
  }
  return out;
}

ScalarModeProfile ScalarModeProfile::derivative_profile() const {
  std::vector<ExpTerm> d;
  for (const ExpTerm& t : terms_) {
    d.push_back(ExpTerm{-t.rate * t.amplitude, t.power, t.rate});
    if (t.power > 0) d.push_back(ExpTerm{t.amplitude * static_cast<double>(t.power), t.power - 1, t.rate});
  }
  ScalarModeProfile out(std::move(d));
  if (table_) out.table_ = ProfileTable{table_->grid, table_node_derivative(*table_), {}};
  return out;
}

ScalarModeProfile ScalarModeProfile::conj() const {
  ScalarModeProfile out = *this;
  for (ExpTerm& t : out.terms_) {
    t.amplitude = std::conj(t.amplitude);
    t.rate = std::conj(t.rate);
  }
  if (out.table_) {
    for (cplx& v : out.table_->values) v = std::conj(v);
    for (cplx& v : out.table_->derivatives) v = std::conj(v);
  }
  return out;
}

double ScalarModeProfile::slowest_rate() const {
  double r = std::numeric_limits<double>::infinity();
  for (const ExpTerm& t : terms_) r = std::min(r, t.rate.real());
  return r;
}

void ScalarModeProfile::require_decay(const char* context) const {
  for (const ExpTerm& t : terms_) {
    if (!(t.rate.real() > 0.0)) {
      throw DomainError(std::string(context) + ": profile term does not decay (Re rate <= 0)");
    }
  }
}

ScalarModeProfile& ScalarModeProfile::operator+=(const ScalarModeProfile& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  merge_terms();
  if (o.table_) {
    if (!table_) {
      table_ = o.table_;
    } else {
      if (!same_grid(table_->grid, o.table_->grid)) throw DomainError("profile sum: tables on different grids");
      for (std::size_t i = 0; i < table_->values.size(); ++i) table_->values[i] += o.table_->values[i];
      if (!table_->derivatives.empty() && !o.table_->derivatives.empty()) {
        for (std::size_t i = 0; i < table_->derivatives.size(); ++i) table_->derivatives[i] += o.table_->derivatives[i];
      } else {
        table_->derivatives.clear();
      }
    }
  }
  return *this;
}

ScalarModeProfile& ScalarModeProfile::operator-=(const ScalarModeProfile& o) { return *this += -o; }

ScalarModeProfile& ScalarModeProfile::operator*=(cplx s) {
  for (ExpTerm& t : terms_) t.amplitude *= s;
  merge_terms();
  if (table_) {
    for (cplx& v : table_->values) v *= s;
    for (cplx& v : table_->derivatives) v *= s;
  }
  return *this;
}

// ---------------------------------------------------------------- VectorModeProfile

const ScalarModeProfile& VectorModeProfile::component(int i) const {
  return i < dim() - 1 ? tangential[static_cast<std::size_t>(i)] : normal;
}
ScalarModeProfile& VectorModeProfile::component(int i) {
  return i < dim() - 1 ? tangential[static_cast<std::size_t>(i)] : normal;
}

VectorModeProfile& VectorModeProfile::operator+=(const VectorModeProfile& o) {
  if (o.dim() != dim()) throw DomainError("vector profile sum: dimension mismatch");
  for (std::size_t j = 0; j < tangential.size(); ++j) tangential[j] += o.tangential[j];
  normal += o.normal;
  return *this;
}

VectorModeProfile& VectorModeProfile::operator-=(const VectorModeProfile& o) {
  if (o.dim() != dim()) throw DomainError("vector profile difference: dimension mismatch");
  for (std::size_t j = 0; j < tangential.size(); ++j) tangential[j] -= o.tangential[j];
  normal -= o.normal;
  return *this;
}

VectorModeProfile& VectorModeProfile::operator*=(cplx s) {
  for (auto& t : tangential) t *= s;
  normal *= s;
  return *this;
}

VectorModeProfile VectorModeProfile::conj() const {
  VectorModeProfile out = *this;
  for (auto& t : out.tangential) t = t.conj();
  out.normal = out.normal.conj();
  return out;
}

ScalarModeProfile tangential_dot(const std::vector<double>& xi, const VectorModeProfile& f) {
  if (static_cast<int>(xi.size()) != f.dim() - 1) throw DomainError("tangential_dot: dimension mismatch");
  ScalarModeProfile acc;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    if (xi[j] != 0.0) acc += f.tangential[j] * cplx(0.0, xi[j]);
  }
  return acc;
}

ScalarModeProfile mode_divergence(const std::vector<double>& xi, const VectorModeProfile& f) {
  return tangential_dot(xi, f) + f.normal.derivative_profile();
}

VectorModeProfile mode_gradient(const std::vector<double>& xi, const ScalarModeProfile& q) {
  VectorModeProfile g(static_cast<int>(xi.size()) + 1);
  for (std::size_t j = 0; j < xi.size(); ++j) g.tangential[j] = q * cplx(0.0, xi[j]);
  g.normal = q.derivative_profile();
  return g;
}

// ---------------------------------------------------------------- half-line convolutions

namespace {

// Pieces L(y) = int_0^y e^{-a(y-eta)} f, R(y) = int_y^inf e^{-a(eta-y)} f of one closed-form term.
// Near-resonant rates |r - a| <= kSeriesRatio Re(a) use a truncated series; the
// neglected tail is below (ratio / (1 - ratio))^terms of the profile scale.
constexpr double kSeriesRatio = 0.1;
constexpr int kSeriesTerms = 20;

void term_pieces(const ExpTerm& t, cplx a, std::vector<ExpTerm>& left, std::vector<ExpTerm>& right) {
  const int m = t.power;
  const cplx c = t.amplitude;
  const cplx r = t.rate;
  const cplx b = r - a;
  const cplx sum = a + r;
  const double mf = factorial(m);
  if (std::abs(b) <= kSeriesRatio * a.real()) {
    // c e^{-a y} int_0^y eta^m e^{-b eta}: Taylor series in b avoids cancellation between
    // e^{-a y} and e^{-r y} when the rates nearly coincide.
    cplx coef = c;
    for (int j = 0; j < kSeriesTerms; ++j) {
      left.push_back(ExpTerm{coef / static_cast<double>(m + j + 1), m + j + 1, a});
      coef *= -b / static_cast<double>(j + 1);
      if (coef == 0.0) break;
    }
  } else {
    left.push_back(ExpTerm{c * mf / std::pow(b, m + 1), 0, a});
    for (int j = 0; j <= m; ++j) {
      left.push_back(ExpTerm{-c * mf / factorial(j) * std::pow(b, j - m - 1), j, r});
    }
  }
  for (int j = 0; j <= m; ++j) {
    right.push_back(ExpTerm{c * mf / factorial(j) * std::pow(sum, j - m - 1), j, r});
  }
}

struct TablePieces {
  std::vector<cplx> left, right;
};

TablePieces table_pieces(const ProfileTable& t, cplx a) {
  const YGrid& g = *t.grid;
  const auto& y = g.nodes();
  const int m = g.size();
  const UnitRule& gl = gauss_legendre_unit(8);
  TablePieces out;
  out.left.assign(m, 0.0);
  out.right.assign(m, 0.0);
  std::vector<cplx> inc_left(m - 1), inc_right(m - 1);
  std::vector<double> sub(kInterpPoints);
  for (int k = 0; k + 1 < m; ++k) {
    const double h = y[k + 1] - y[k];
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(a) * h / 1.5)));
    const int start = g.interpolation_start(k);
    std::copy(y.begin() + start, y.begin() + start + kInterpPoints, sub.begin());
    cplx sl = 0.0, sr = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double t0 = y[k] + h * p / panels;
      const double hp = h / panels;
      for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        const double eta = t0 + hp * gl.nodes[q];
        const auto w = fornberg_weights(eta, sub, 0);
        cplx f = 0.0;
        for (int j = 0; j < kInterpPoints; ++j) f += w[0][j] * t.values[start + j];
        const double wq = hp * gl.weights[q];
        sl += wq * std::exp(-a * (y[k + 1] - eta)) * f;
        sr += wq * std::exp(-a * (eta - y[k])) * f;
      }
    }
    inc_left[k] = sl;
    inc_right[k] = sr;
  }
  for (int k = 0; k + 1 < m; ++k) {
    out.left[k + 1] = std::exp(-a * (y[k + 1] - y[k])) * out.left[k] + inc_left[k];
  }
  for (int k = m - 2; k >= 0; --k) {
    out.right[k] = std::exp(-a * (y[k + 1] - y[k])) * out.right[k + 1] + inc_right[k];
  }
  return out;
}

void require_rate(cplx a) {
  if (!(a.real() > 0.0)) throw DomainError("convolution rate must have positive real part");
}

}  // namespace

ScalarModeProfile half_line_convolution(const ScalarModeProfile& f, cplx a, Parity parity) {
  require_rate(a);
  f.require_decay("half_line_convolution");
  std::vector<ExpTerm> left, right;
  for (const ExpTerm& t : f.terms()) term_pieces(t, a, left, right);
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  for (ExpTerm& t : right) t.amplitude *= sign;
  left.insert(left.end(), right.begin(), right.end());
  ScalarModeProfile out(std::move(left));
  if (f.has_table()) {
    const ProfileTable& t = *f.table();
    const TablePieces pc = table_pieces(t, a);
    const int m = t.grid->size();
    std::vector<cplx> v(m), d(m);
    for (int i = 0; i < m; ++i) {
      if (parity == Parity::even) {
        v[i] = pc.left[i] + pc.right[i];
        d[i] = -a * (pc.left[i] - pc.right[i]);
      } else {
        v[i] = pc.left[i] - pc.right[i];
        d[i] = 2.0 * t.values[i] - a * (pc.left[i] + pc.right[i]);
      }
    }
    out += ScalarModeProfile::tabulated(t.grid, std::move(v), std::move(d));
  }
  return out;
}

cplx laplace_moment(const ScalarModeProfile& f, cplx a) {
  require_rate(a);
  f.require_decay("laplace_moment");
  cplx acc = 0.0;
  for (const ExpTerm& t : f.terms()) {
    acc += t.amplitude * factorial(t.power) / std::pow(a + t.rate, t.power + 1);
  }
  if (f.has_table()) acc += table_pieces(*f.table(), a).right[0];
  return acc;
}

ScalarModeProfile cumulative_integral(const ScalarModeProfile& f) {
  if (!f.terms().empty() || !f.has_table()) throw DomainError("cumulative_integral expects a pure table");
  const ProfileTable& t = *f.table();
  const YGrid& g = *t.grid;
  const auto& y = g.nodes();
  const int m = g.size();
  const UnitRule& gl = gauss_legendre_unit(8);
  std::vector<cplx> acc(m, 0.0);
  std::vector<double> sub(kInterpPoints);
  for (int k = 0; k + 1 < m; ++k) {
    const double h = y[k + 1] - y[k];
    const int start = g.interpolation_start(k);
    std::copy(y.begin() + start, y.begin() + start + kInterpPoints, sub.begin());
    cplx s = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const auto w = fornberg_weights(y[k] + h * gl.nodes[q], sub, 0);
      cplx fv = 0.0;
      for (int j = 0; j < kInterpPoints; ++j) fv += w[0][j] * t.values[start + j];
      s += h * gl.weights[q] * fv;
    }
    acc[k + 1] = acc[k] + s;
  }
  return ScalarModeProfile::tabulated(t.grid, std::move(acc), t.values);
}

}  // namespace hstokes
