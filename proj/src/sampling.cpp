// SPDX-License-Identifier: Apache-2.0
#include "hstokes/sampling.hpp"

#include <cmath>

#include "hstokes/errors.hpp"

namespace hstokes {

double Rng::log_uniform(double a, double b) {
  if (!(a > 0.0 && b >= a)) throw DomainError("log_uniform: need 0 < a <= b");
  return std::exp(uniform(std::log(a), std::log(b)));
}

std::vector<double> Rng::direction(int d) {
  if (d < 1) throw DomainError("direction: dimension must be positive");
  std::vector<double> v(d);
  for (;;) {
    double r2 = 0.0;
    for (double& c : v) {
      c = uniform(-1.0, 1.0);
      r2 += c * c;
    }
    if (r2 > 1e-6 && r2 <= 1.0) {
      const double r = std::sqrt(r2);
      for (double& c : v) c /= r;
      return v;
    }
  }
}

std::vector<ModeParams> sample_modes(const ModeSampleCfg& cfg, std::size_t count, std::uint64_t seed) {
  if (cfg.epsilons.empty() || cfg.dims.empty()) throw DomainError("sample_modes: empty epsilon or dimension list");
  Rng rng(seed);
  std::vector<ModeParams> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int n = cfg.dims[rng.index(cfg.dims.size())];
    if (n < 2) throw DomainError("sample_modes: dimension must be at least 2");
    const double eps = cfg.epsilons[rng.index(cfg.epsilons.size())];
    const double rho = rng.log_uniform(cfg.rho_min, cfg.rho_max);
    const double mu = rng.log_uniform(cfg.mu_min, cfg.mu_max);
    const double lam = rng.uniform(0.0, cfg.lambda_im_max);
    const double k = rng.log_uniform(cfg.xi_min, cfg.xi_max);
    std::vector<double> xi = rng.direction(n - 1);
    for (double& c : xi) c *= k;
    out.push_back(derive_mode({rho, mu, eps}, cplx(0.0, lam), std::move(xi)));
  }
  return out;
}

}  // namespace hstokes
