// SPDX-License-Identifier: Apache-2.0
//
// Wall-normal profiles of a single tangential mode. A profile is a finite sum
// of terms a * y^m * exp(-r y) (closed form) plus an optional table of node
// values on a graded grid (produced by quadrature of non-closed inputs).
#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

namespace hstokes {

using cplx = std::complex<double>;

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
/// Returns weights[k][j] for derivative order k <= max_order at x0.
std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& nodes, int max_order);

struct Stencil {
  int start = 0;
  std::vector<double> weights;
};

/// Wall-normal grid on [0, Y]. Graded grids are geometric with ratio `stretch`
/// between consecutive spacings; refining halves every cell.
class YGrid {
 public:
  static std::shared_ptr<const YGrid> graded(int points, double length, double stretch);
  static std::shared_ptr<const YGrid> uniform(int points, double length);

  const std::vector<double>& nodes() const { return y_; }
  int size() const { return static_cast<int>(y_.size()); }
  double length() const { return y_.back(); }
  double stretch() const { return stretch_; }
  std::shared_ptr<const YGrid> refined() const;
  bool same_nodes(const YGrid& other) const { return y_ == other.y_; }

  /// Fourth-order first and second derivative stencils at node i.
  const Stencil& d1(int i) const { return d1_[i]; }
  const Stencil& d2(int i) const { return d2_[i]; }
  /// Second-order three-point first derivative, used as a resolution cross-check.
  const Stencil& d1_low(int i) const { return d1_low_[i]; }
  /// Weights of a fourth-order rule for integrals over [0, Y].
  const std::vector<double>& integration_weights() const { return quad_; }

  /// Interval index k with y in [y_k, y_{k+1}]; -1 when y > Y.
  int locate(double y) const;
  /// First node of the six-point interpolation stencil used on interval k.
  int interpolation_start(int k) const;

  template <class V>
  double apply(const Stencil& s, const V& values) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < s.weights.size(); ++j) acc += s.weights[j] * values[s.start + j];
    return acc;
  }

 private:
  explicit YGrid(std::vector<double> nodes, double stretch);
  std::vector<double> y_;
  double stretch_ = 1.0;
  std::vector<Stencil> d1_, d2_, d1_low_;
  std::vector<double> quad_;
};

using YGridPtr = std::shared_ptr<const YGrid>;

struct ExpTerm {
  cplx amplitude;
  int power = 0;
  cplx rate;
};

struct ProfileTable {
  YGridPtr grid;
  std::vector<cplx> values;
  std::vector<cplx> derivatives;  // empty when not known
};

class ScalarModeProfile {
 public:
  ScalarModeProfile() = default;
  explicit ScalarModeProfile(std::vector<ExpTerm> terms);

  static ScalarModeProfile exponential(cplx amplitude, cplx rate, int power = 0);
  static ScalarModeProfile tabulated(YGridPtr grid, std::vector<cplx> values, std::vector<cplx> derivatives = {});

  const std::vector<ExpTerm>& terms() const { return terms_; }
  const std::optional<ProfileTable>& table() const { return table_; }
  bool has_table() const { return table_.has_value(); }
  bool is_zero() const;

  cplx value(double y) const;
  cplx derivative(double y) const;
  /// Derivative of arbitrary order; only defined for closed-form profiles when order >= 2.
  cplx derivative(double y, int order) const;
  cplx operator()(double y) const { return value(y); }
  /// Sum of the magnitudes of the individual terms of the order-th derivative (no cancellation);
  /// the scale against which relative residuals are measured. Order <= 1 when a table is present.
  double magnitude(double y, int order = 0) const;

  /// Values (and first derivatives) at every node of `grid`. Table parts must live on the same nodes.
  std::vector<cplx> sample(const YGrid& grid) const;
  std::vector<cplx> sample_derivative(const YGrid& grid) const;

  ScalarModeProfile derivative_profile() const;
  ScalarModeProfile conj() const;

  /// Smallest Re(rate) over closed-form terms; +inf for a pure table or zero profile.
  double slowest_rate() const;
  void require_decay(const char* context) const;

  ScalarModeProfile& operator+=(const ScalarModeProfile& o);
  ScalarModeProfile& operator-=(const ScalarModeProfile& o);
  ScalarModeProfile& operator*=(cplx s);
  friend ScalarModeProfile operator+(ScalarModeProfile a, const ScalarModeProfile& b) { return a += b; }
  friend ScalarModeProfile operator-(ScalarModeProfile a, const ScalarModeProfile& b) { return a -= b; }
  friend ScalarModeProfile operator*(ScalarModeProfile a, cplx s) { return a *= s; }
  friend ScalarModeProfile operator*(cplx s, ScalarModeProfile a) { return a *= s; }
  ScalarModeProfile operator-() const { return *this * cplx(-1.0); }

 private:
  void merge_terms();
  cplx closed_value(double y, int order) const;
  std::vector<ExpTerm> terms_;
  std::optional<ProfileTable> table_;
};

struct VectorModeProfile {
  std::vector<ScalarModeProfile> tangential;
  ScalarModeProfile normal;

  VectorModeProfile() = default;
  explicit VectorModeProfile(int n) : tangential(static_cast<std::size_t>(n - 1)) {}
  int dim() const { return static_cast<int>(tangential.size()) + 1; }
  const ScalarModeProfile& component(int i) const;
  ScalarModeProfile& component(int i);

  VectorModeProfile& operator+=(const VectorModeProfile& o);
  VectorModeProfile& operator-=(const VectorModeProfile& o);
  VectorModeProfile& operator*=(cplx s);
  friend VectorModeProfile operator+(VectorModeProfile a, const VectorModeProfile& b) { return a += b; }
  friend VectorModeProfile operator-(VectorModeProfile a, const VectorModeProfile& b) { return a -= b; }
  friend VectorModeProfile operator*(cplx s, VectorModeProfile a) { return a *= s; }
  VectorModeProfile conj() const;
};

/// Mode divergence i xi . f_tan + d/dy f_normal.
ScalarModeProfile mode_divergence(const std::vector<double>& xi, const VectorModeProfile& f);
/// Mode gradient (i xi q, dq/dy).
VectorModeProfile mode_gradient(const std::vector<double>& xi, const ScalarModeProfile& q);
/// i xi . f_tan
ScalarModeProfile tangential_dot(const std::vector<double>& xi, const VectorModeProfile& f);

enum class Parity { even, odd };

/// y -> int_0^inf e^{-a|y-eta|} f(eta) d eta (even) or the same with sign(y-eta) (odd).
/// Exact on closed-form terms (resonant rates produce polynomial factors); tables use
/// product integration of a six-point local interpolant. Requires Re(a) > 0.
ScalarModeProfile half_line_convolution(const ScalarModeProfile& f, cplx a, Parity parity);

/// int_0^inf e^{-a eta} f(eta) d eta.
cplx laplace_moment(const ScalarModeProfile& f, cplx a);

/// int_0^y f (pure table input), returned as a table with derivative f.
ScalarModeProfile cumulative_integral(const ScalarModeProfile& f);

}  // namespace hstokes
