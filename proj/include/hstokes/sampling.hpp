// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hstokes/symbol_core.hpp"

namespace hstokes {

/// mt19937_64 with explicit bit-to-double mappings, so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double log_uniform(double a, double b);
  /// Index in [0, n).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  cplx unit_box_complex() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }
  /// Uniform direction on the unit sphere of R^d (rejection from the cube).
  std::vector<double> direction(int d);

 private:
  std::mt19937_64 gen_;
};

struct ModeSampleCfg {
  double xi_min = 1e-2, xi_max = 1e2;  // |xi| log-uniform
  double lambda_im_max = 1e2;          // lambda = i * uniform[0, max]
  std::vector<double> epsilons = {1e-2, 1.0, 1e2};
  double rho_min = 0.1, rho_max = 10.0;  // log-uniform
  double mu_min = 0.1, mu_max = 10.0;    // log-uniform
  std::vector<int> dims = {2, 3, 4};
};

std::vector<ModeParams> sample_modes(const ModeSampleCfg& cfg, std::size_t count, std::uint64_t seed);

}  // namespace hstokes
