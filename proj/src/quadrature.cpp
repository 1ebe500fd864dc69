// SPDX-License-Identifier: Apache-2.0
#include "hstokes/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hstokes/errors.hpp"

namespace hstokes {

namespace {

using cplx = std::complex<double>;

struct Panel {
  double a, b;
  cplx value;
  double error;
  double l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<cplx(double)>& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G7 = boost::math::quadrature::gauss<double, 7>;
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G7::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  const cplx f0 = f(c);
  cplx k = f0 * wk[0];
  cplx g = f0 * wg[0];
  double l1 = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const cplx fp = f(c + h * x[i]);
    const cplx fm = f(c - h * x[i]);
    k += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 0) g += (fp + fm) * wg[i / 2];
  }
  Panel p{a, b, k * h, std::abs((k - g) * h), l1 * std::abs(h)};
  return p;
}

}  // namespace

void QuadratureCfg::validate() const {
  if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) throw DomainError("quadrature rel_tol must be positive");
  if (!(truncation_multiplier > 0.0)) throw DomainError("quadrature truncation_multiplier must be positive");
  if (max_subdivisions < 0) throw DomainError("quadrature max_subdivisions must be nonnegative");
}

QuadratureResult integrate_adaptive(const std::function<cplx(double)>& f, const std::vector<double>& breaks,
                                    const QuadratureCfg& cfg) {
  if (breaks.size() < 2) throw DomainError("integrate_adaptive: need at least two breakpoints");
  std::priority_queue<Panel> heap;
  cplx total = 0.0;
  double err = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Panel p = gk15(f, breaks[i], breaks[i + 1]);
    total += p.value;
    err += p.error;
    l1 += p.l1;
    heap.push(p);
  }
  QuadratureResult r;
  auto done = [&] { return err <= cfg.rel_tol * std::max(std::abs(total), 1e-3 * l1) || err == 0.0; };
  while (!heap.empty() && !done() && r.subdivisions < cfg.max_subdivisions) {
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) break;  // interval exhausted at double resolution
    Panel left = gk15(f, p.a, m);
    Panel right = gk15(f, m, p.b);
    total += left.value + right.value - p.value;
    err += left.error + right.error - p.error;
    l1 += left.l1 + right.l1 - p.l1;
    heap.push(left);
    heap.push(right);
    ++r.subdivisions;
  }
  // Re-sum to shed the drift of incremental updates.
  total = 0.0;
  err = 0.0;
  l1 = 0.0;
  std::vector<Panel> panels;
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const Panel& p : panels) {
    total += p.value;
    err += p.error;
    l1 += p.l1;
  }
  r.value = total;
  r.error_estimate = err;
  r.l1_norm = l1;
  r.converged = done();
  return r;
}

const UnitRule& gauss_legendre_unit(int points) {
  auto build = [](auto tag) {
    using G = decltype(tag);
    UnitRule r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    std::vector<std::pair<double, double>> nodes;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) {
        nodes.emplace_back(0.0, w[i]);
      } else {
        nodes.emplace_back(-x[i], w[i]);
        nodes.emplace_back(x[i], w[i]);
      }
    }
    std::sort(nodes.begin(), nodes.end());
    for (auto [xi, wi] : nodes) {
      r.nodes.push_back(0.5 * (1.0 + xi));
      r.weights.push_back(0.5 * wi);
    }
    return r;
  };
  static const UnitRule r4 = build(boost::math::quadrature::gauss<double, 4>());
  static const UnitRule r8 = build(boost::math::quadrature::gauss<double, 8>());
  static const UnitRule r12 = build(boost::math::quadrature::gauss<double, 12>());
  if (points == 4) return r4;
  if (points == 8) return r8;
  if (points == 12) return r12;
  throw DomainError("gauss_legendre_unit: supported point counts are 4, 8, 12");
}

}  // namespace hstokes
