// SPDX-License-Identifier: Apache-2.0
#include "hstokes/symbol_core.hpp"

#include <cmath>
#include <sstream>

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>

#include "hstokes/errors.hpp"

namespace hstokes {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double euclid(const std::vector<double>& v) {
  double scale = 0.0;
  for (double c : v) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double c : v) s += (c / scale) * (c / scale);
  return scale * std::sqrt(s);
}

void require_symbol_case(const BcSpec& bc) {
  if (bc.beta == -1) {
    throw UnsupportedCaseError(
        "boundary symbol for beta = -1 is not assembled; the pressure is prescribed directly "
        "(use solve_mode or splitting_solve_mode)");
  }
}

// i*zeta / omega as a column vector.
CVector scaled_izeta(const ModeParams& m) {
  const int t = m.dim() - 1;
  CVector v(t);
  for (int j = 0; j < t; ++j) v(j) = kI * m.zeta[j] / m.omega;
  return v;
}

}  // namespace

void FluidConstants::validate() const {
  auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!ok(rho) || !ok(mu) || !ok(epsilon)) {
    std::ostringstream os;
    os << "fluid constants must be finite and positive (rho=" << rho << ", mu=" << mu
       << ", epsilon=" << epsilon << ")";
    throw DomainError(os.str());
  }
}

cplx ModeParams::velocity_rate() const { return omega / std::sqrt(constants.mu); }

ModeParams derive_mode(const FluidConstants& constants, cplx lambda, std::vector<double> xi) {
  constants.validate();
  if (!finite(lambda)) throw DomainError("lambda must be finite");
  if (lambda.real() < 0.0) throw DomainError("Re(lambda) must be nonnegative");
  if (xi.empty()) throw DomainError("xi must have length n-1 >= 1");
  for (double c : xi) {
    if (!std::isfinite(c)) throw DomainError("xi must be finite");
  }

  ModeParams m;
  m.constants = constants;
  m.lambda = lambda;
  m.lambda_eps = constants.epsilon + lambda;
  const double sqmu = std::sqrt(constants.mu);
  m.zeta.resize(xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) m.zeta[j] = sqmu * xi[j];
  m.xi_norm = euclid(xi);
  m.zeta_norm = sqmu * m.xi_norm;
  m.kappa = constants.rho * sqmu;
  m.rho_lambda_eps = constants.rho * m.lambda_eps;
  m.omega = std::sqrt(m.rho_lambda_eps + m.zeta_norm * m.zeta_norm);
  m.xi = std::move(xi);
  return m;
}

BcSpec::BcSpec(int a, int b) : alpha(a), beta(b) {
  if (a < -1 || a > 1 || b < -1 || b > 1) throw DomainError("alpha and beta must lie in {-1, 0, +1}");
}

BcClass BcSpec::bc_class() const {
  if (beta == 0) return BcClass::B1;
  if ((alpha == 1 && beta == -1) || (alpha == -1 && beta == 1)) return BcClass::B3;
  return BcClass::B2;
}

std::string BcSpec::label() const {
  if (beta == 0) return alpha == 0 ? "B1a" : (alpha == 1 ? "B1b" : "B1c");
  if (beta == 1) return alpha == 0 ? "B2a" : (alpha == 1 ? "B2b" : "B3b");
  return alpha == 0 ? "B2c" : (alpha == -1 ? "B2d" : "B3a");
}

std::string BcSpec::name() const {
  auto sgn = [](int v) { return v == 0 ? std::string("0") : (v > 0 ? "+1" : "-1"); };
  return "(" + sgn(alpha) + "," + sgn(beta) + ")";
}

std::vector<BcSpec> BcSpec::all() {
  std::vector<BcSpec> out;
  for (int b : {0, 1, -1})
    for (int a : {0, 1, -1}) out.emplace_back(a, b);
  return out;
}

std::string to_string(BcClass c) {
  switch (c) {
    case BcClass::B1: return "B1";
    case BcClass::B2: return "B2";
    case BcClass::B3: return "B3";
  }
  return "?";
}

AnsatzMatrix ansatz_matrix(const ModeParams& mode, int n) {
  if (n < 2 || n != mode.dim()) throw DomainError("ansatz_matrix: dimension does not match length(xi)+1");
  const int t = n - 1;
  AnsatzMatrix a;
  a.n = n;
  a.entries = CMatrix::Zero(n + 1, n);
  for (int j = 0; j < t; ++j) {
    a.entries(j, j) = mode.omega;
    a.entries(j, t) = -kI * mode.zeta[j];
    a.entries(t, j) = kI * mode.zeta[j];
  }
  a.entries(t, t) = mode.zeta_norm;
  a.entries(n, t) = mode.kappa * mode.lambda_eps;
  a.velocity_rate = mode.velocity_rate();
  a.pressure_rate = mode.xi_norm;
  return a;
}

namespace {

// omega^2 + a zeta_i^2; for a = -1 written as rho lambda_eps + sum_{j != i} zeta_j^2 to avoid cancellation.
cplx diagonal_gap(const ModeParams& m, int i, double a) {
  if (a > 0) return m.omega * m.omega + m.zeta[i] * m.zeta[i];
  cplx acc = m.rho_lambda_eps;
  for (std::size_t j = 0; j < m.zeta.size(); ++j) {
    if (static_cast<int>(j) != i) acc += m.zeta[j] * m.zeta[j];
  }
  return acc;
}

}  // namespace

CMatrix boundary_symbol(const ModeParams& m, const BcSpec& bc) {
  require_symbol_case(bc);
  const int n = m.dim();
  const int t = n - 1;
  const double sqmu = std::sqrt(m.constants.mu);
  const double z = m.zeta_norm;
  const cplx w = m.omega;
  CMatrix b = CMatrix::Zero(n, n);

  for (int i = 0; i < t; ++i) {
    const cplx izi = kI * m.zeta[i];
    if (bc.alpha == 0) {
      b(i, i) = w;
      b(i, t) = -izi;
    } else {
      const double a = bc.alpha;
      for (int j = 0; j < t; ++j) b(i, j) = -sqmu * izi * (kI * m.zeta[j]);
      b(i, i) = a * sqmu * diagonal_gap(m, i, a);
      b(i, t) = -sqmu * (izi * z + a * izi * z);
    }
  }
  if (bc.beta == 0) {
    for (int j = 0; j < t; ++j) b(t, j) = kI * m.zeta[j];
    b(t, t) = z;
  } else {
    for (int j = 0; j < t; ++j) b(t, j) = 2.0 * sqmu * w * kI * m.zeta[j];
    b(t, t) = m.kappa * m.lambda_eps + 2.0 * sqmu * z * z;
  }
  return b;
}

SymbolFactors boundary_symbol_factors(const ModeParams& m, const BcSpec& bc) {
  require_symbol_case(bc);
  const int n = m.dim();
  const int t = n - 1;
  const double sqmu = std::sqrt(m.constants.mu);
  const cplx w = m.omega;
  const cplx r = m.zeta_norm / w;
  const CVector iw = scaled_izeta(m);

  SymbolFactors f;
  f.prefactor.resize(n);
  f.reduced = CMatrix::Zero(n, n);
  for (int i = 0; i < t; ++i) {
    if (bc.alpha == 0) {
      f.prefactor(i) = w;
      f.reduced(i, i) = 1.0;
      f.reduced(i, t) = -iw(i);
    } else {
      const double a = bc.alpha;
      f.prefactor(i) = a * sqmu * w * w;
      for (int j = 0; j < t; ++j) f.reduced(i, j) = -a * iw(i) * iw(j);
      f.reduced(i, i) = diagonal_gap(m, i, a) / (w * w);
      f.reduced(i, t) = -a * iw(i) * (r + a * r);
    }
  }
  for (int j = 0; j < t; ++j) f.reduced(t, j) = iw(j);
  if (bc.beta == 0) {
    f.prefactor(t) = w;
    f.reduced(t, t) = r;
  } else {
    f.prefactor(t) = 2.0 * sqmu * w * w;
    f.reduced(t, t) = 0.5 * (1.0 + r * r);
  }
  return f;
}

double norm_inf(const CMatrix& m) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

SymbolInverse closed_form_inverse(const ModeParams& m, const BcSpec& bc) {
  require_symbol_case(bc);
  if (bc.beta == 0 && m.is_zero_mode()) {
    throw SingularModeError("boundary symbol with beta = 0 is singular at xi = 0");
  }
  const int n = m.dim();
  const int t = n - 1;
  const cplx w = m.omega;
  const double z = m.zeta_norm;
  const cplx r = z / w;
  const cplx r2 = r * r;
  const cplx rl = m.rho_lambda_eps;
  const cplx w2 = w * w;
  const cplx one_minus_r2 = rl / w2;  // 1 - |zeta|^2/omega^2
  const CVector iw = scaled_izeta(m);
  const double a = bc.alpha;

  // Reduced inverse: (1/d) [[d I + c O, top], [-iw^T, corner]], O = iw iw^T.
  cplx d, c, corner;
  cplx top_scale;  // top-right block = top_scale * iw
  if (bc.beta == 0) {
    if (bc.alpha == 0) {
      d = rl * z / (w2 * (w + z));  // (1 - r) r
      c = -1.0;
      top_scale = 1.0;
      corner = 1.0;
    } else {
      d = one_minus_r2 * r;
      c = -r;
      top_scale = r + a * r;
      corner = (a > 0) ? 1.0 + r2 : one_minus_r2;
    }
  } else {
    if (bc.alpha == 0) {
      d = 0.5 * one_minus_r2;
      c = -1.0;
      top_scale = 1.0;
      corner = 1.0;
    } else if (bc.alpha == 1) {
      d = rl * (rl + 4.0 * w * z * z / (w + z)) / (2.0 * w2 * w2);
      c = 0.5 * (1.0 + r2) - 2.0 * r;
      top_scale = 2.0 * r;
      corner = 1.0 + r2;
    } else {
      d = 0.5 * (1.0 + r2) * one_minus_r2;
      c = -0.5 * (1.0 + r2);
      top_scale = 0.0;
      corner = one_minus_r2;
    }
  }

  CMatrix red(n, n);
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) red(i, j) = c * iw(i) * iw(j);
    red(i, i) += d;
    red(i, t) = top_scale * iw(i);
    red(t, i) = -iw(i);
  }
  red(t, t) = corner;
  red /= d;

  const SymbolFactors f = boundary_symbol_factors(m, bc);
  SymbolInverse out;
  out.inverse = red;
  for (int j = 0; j < n; ++j) out.inverse.col(j) /= f.prefactor(j);
  out.condition = norm_inf(boundary_symbol(m, bc)) * norm_inf(out.inverse);
  out.near_singular = !(out.condition < kNearSingularCondition);
  return out;
}

CVector solve_symbol(const ModeParams& mode, const BcSpec& bc, cplx h_w) {
  const SymbolInverse inv = closed_form_inverse(mode, bc);
  return inv.inverse.col(mode.dim() - 1) * h_w;
}

cplx trace_multiplier(const ModeParams& m, const BcSpec& bc) {
  const cplx w = m.omega;
  const double z = m.zeta_norm;
  const cplx rl = m.rho_lambda_eps;
  const cplx w2 = w * w;
  if (bc.beta == 0) {
    if (bc.alpha == 0) return w * (w + z);
    return bc.alpha > 0 ? w2 + z * z : rl;
  }
  if (bc.beta == 1) {
    if (bc.alpha == 0) return 1.0;
    if (bc.alpha > 0) return (w2 + z * z) / (rl + 4.0 * w * z * z / (w + z));
    return rl / (w2 + z * z);
  }
  return 1.0;
}

CMatrix generic_inverse(const CMatrix& m) {
  using cl = std::complex<long double>;
  using LMatrix = Eigen::Matrix<cl, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.rows() != m.cols()) throw DomainError("generic_inverse: matrix must be square");
  const Eigen::Index n = m.rows();
  LMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cl(m(i, j).real(), m(i, j).imag());
  const LMatrix inv = a.partialPivLu().inverse();
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = cplx(static_cast<double>(inv(i, j).real()), static_cast<double>(inv(i, j).imag()));
  return out;
}

CMatrix reference_symbol_inverse(const ModeParams& m, const BcSpec& bc) {
  require_symbol_case(bc);
  using qr = boost::multiprecision::float128;
  using qc = boost::multiprecision::complex128;
  using QMatrix = std::vector<std::vector<qc>>;
  const int n = m.dim();
  const int t = n - 1;
  const qr mu = m.constants.mu, rho = m.constants.rho, sq = sqrt(mu);
  const qc lam(qr(m.constants.epsilon) + qr(m.lambda.real()), qr(m.lambda.imag()));
  const qc i1(0, 1);
  std::vector<qr> z(t);
  qr z2 = 0;
  for (int i = 0; i < t; ++i) {
    z[i] = sq * qr(m.xi[i]);
    z2 += z[i] * z[i];
  }
  const qr zn = sqrt(z2);
  const qc w = sqrt(rho * lam + z2);

  QMatrix a(n, std::vector<qc>(2 * n, qc(0)));
  for (int i = 0; i < t; ++i) {
    if (bc.alpha == 0) {
      a[i][i] = w;
      a[i][t] = -i1 * z[i];
    } else {
      for (int j = 0; j < t; ++j) a[i][j] = sq * z[i] * z[j];
      a[i][i] += qr(bc.alpha) * sq * w * w;
      a[i][t] = -sq * i1 * z[i] * zn * qr(1 + bc.alpha);
    }
  }
  if (bc.beta == 0) {
    for (int j = 0; j < t; ++j) a[t][j] = i1 * z[j];
    a[t][t] = zn;
  } else {
    for (int j = 0; j < t; ++j) a[t][j] = qr(2) * sq * w * i1 * z[j];
    a[t][t] = rho * sq * lam + qr(2) * sq * z2;
  }

  for (int i = 0; i < n; ++i) a[i][n + i] = qc(1);
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (abs(a[r][c]) > abs(a[p][c])) p = r;
    if (abs(a[p][c]) == 0) throw SingularModeError("reference_symbol_inverse: singular symbol");
    std::swap(a[c], a[p]);
    const qc piv = a[c][c];
    for (auto& x : a[c]) x /= piv;
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const qc f = a[r][c];
      for (int j = c; j < 2 * n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  CMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = cplx(static_cast<double>(a[i][n + j].real()), static_cast<double>(a[i][n + j].imag()));
  return out;
}

}  // namespace hstokes
