#pragma once

// Preconditioners: root elimination polynomials, band Toeplitz T_n(p),
// circulants (Strang, optimal, sampled eigenvalues) and band-times-circulant.

#include <lapacke.h>

#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "toep/approx.hpp"
#include "toep/core.hpp"
#include "toep/fft.hpp"

namespace toep {

struct ZeroRoot {
  int m1 = 0;  // multiplicity of f1 at 0 (even)
  int m2 = 0;  // multiplicity of f2 at 0 (odd or zero)
};

struct NonzeroRoot {
  double x = 0.0;  // in (0, pi)
  int m1 = 0;
  int m2 = 0;
};

struct RootSpec {
  std::optional<ZeroRoot> zero;
  std::vector<NonzeroRoot> roots;
  int sign1 = 1;
  int sign2 = 1;

  bool empty() const { return !zero && roots.empty(); }

  // True when every f1 multiplicity is at most the f2 one, so g stays real.
  bool real_form() const {
    if (zero && zero->m1 > zero->m2) return false;
    for (const auto& r : roots)
      if (r.m1 > r.m2) return false;
    return true;
  }
};

inline TrigPolynomial scaled(TrigPolynomial p, double s) {
  for (double& v : p.even) v *= s;
  for (double& v : p.odd) v *= s;
  return p;
}

inline TrigPolynomial sum(const TrigPolynomial& p, const TrigPolynomial& q) {
  TrigPolynomial r;
  r.even.assign(std::max(p.even.size(), q.even.size()), 0.0);
  r.odd.assign(std::max(p.odd.size(), q.odd.size()), 0.0);
  for (std::size_t k = 0; k < r.even.size(); ++k) r.even[k] = p.a(static_cast<int>(k)) + q.a(static_cast<int>(k));
  for (std::size_t k = 1; k < r.odd.size(); ++k) r.odd[k] = p.b(static_cast<int>(k)) + q.b(static_cast<int>(k));
  return r;
}

inline TrigPolynomial power(const TrigPolynomial& p, int m) {
  TrigPolynomial r = TrigPolynomial::constant(1.0);
  for (int i = 0; i < m; ++i) r = product(r, p);
  return r;
}

inline void validate(const RootSpec& roots) {
  if (roots.zero) {
    if (roots.zero->m1 < 0 || roots.zero->m2 < 0) throw error(errc::parity, "negative multiplicity");
    if (roots.zero->m1 % 2 != 0) throw error(errc::parity, "odd multiplicity of the even part at 0");
    if (roots.zero->m2 != 0 && roots.zero->m2 % 2 == 0)
      throw error(errc::parity, "even multiplicity of the odd part at 0");
  }
  double prev = 0.0;
  for (const auto& r : roots.roots) {
    if (r.m1 < 0 || r.m2 < 0) throw error(errc::parity, "negative multiplicity");
    if (!(r.x > prev && r.x < pi)) throw error(errc::dimension, "nonzero roots must increase inside (0, pi)");
    prev = r.x;
  }
  if (std::abs(roots.sign1) != 1 || std::abs(roots.sign2) != 1) throw error(errc::usage, "signs must be +-1");
}

// g = g1 + i g2 sharing the roots (and multiplicities) of f.
inline TrigPolynomial build_elimination_poly(const RootSpec& roots) {
  validate(roots);
  const TrigPolynomial two_minus_two_cos{Vec{2.0, -2.0}, Vec{0.0}};
  const TrigPolynomial i_sin{Vec{0.0}, Vec{0.0, 1.0}};
  auto cos_gap = [](double xi) { return TrigPolynomial{Vec{std::cos(xi), -1.0}, Vec{0.0}}; };

  TrigPolynomial g1 = TrigPolynomial::constant(static_cast<double>(roots.sign1));
  if (roots.zero) g1 = product(g1, power(two_minus_two_cos, roots.zero->m1 / 2));
  for (const auto& r : roots.roots) g1 = product(g1, power(cos_gap(r.x), r.m1));
  if (roots.real_form()) return g1;

  const int m02 = roots.zero ? roots.zero->m2 : 0;
  if (m02 % 2 == 0)
    throw error(errc::parity, "odd part must vanish to odd order at 0 for the complex elimination form");
  // (i sin x)^m = i (-1)^((m-1)/2) sin^m x, so i g2 = sign2 (-1)^((m-1)/2) (i sin x)^m prod(...)
  TrigPolynomial ig2 = power(i_sin, m02);
  for (const auto& r : roots.roots) ig2 = product(ig2, power(cos_gap(r.x), r.m2));
  const double s = roots.sign2 * (((m02 - 1) / 2) % 2 == 0 ? 1.0 : -1.0);
  return sum(g1, scaled(ig2, s));
}

// g(x) from its factors; avoids the cancellation of the expanded form near roots.
inline cplx elimination_value(const RootSpec& r, double x) {
  double g1 = r.sign1;
  if (r.zero) {
    const double s = 2.0 * std::sin(x / 2.0);
    g1 *= std::pow(s * s, r.zero->m1 / 2);
  }
  auto gap = [x](double xi) { return 2.0 * std::sin((x + xi) / 2.0) * std::sin((x - xi) / 2.0); };
  for (const auto& q : r.roots) g1 *= std::pow(gap(q.x), q.m1);
  if (r.real_form()) return {g1, 0.0};
  double g2 = r.sign2 * std::pow(std::sin(x), r.zero ? r.zero->m2 : 0);
  for (const auto& q : r.roots) g2 *= std::pow(gap(q.x), q.m2);
  return {g1, g2};
}

// Evaluation points in (-pi, pi] away from the roots of a spec.
inline Vec sign_grid(const RootSpec& roots, double radius, int m = 2048) {
  Vec out;
  for (int j = 0; j < m; ++j) {
    double x = -pi + 2.0 * pi * (j + 0.5) / m;
    bool keep = true;
    if (roots.zero && std::abs(x) < radius) keep = false;
    for (const auto& r : roots.roots)
      if (std::abs(std::abs(x) - r.x) < radius) keep = false;
    if (keep) out.push_back(x);
  }
  return out;
}

struct SignChoice {
  int sign1 = 1;
  int sign2 = 1;
  double min_ratio = 0.0;
};

// Picks the sign pair maximizing min Re(f/g) over the sampled points.
inline SignChoice choose_signs(const Vec& x, const CVec& fvals, const RootSpec& roots) {
  SignChoice best;
  bool have = false;
  const int pairs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (const auto& sp : pairs) {
    RootSpec r = roots;
    r.sign1 = sp[0];
    r.sign2 = sp[1];
    TrigPolynomial g = build_elimination_poly(r);
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < x.size(); ++j) lo = std::min(lo, (fvals[j] / g(x[j])).real());
    if (!have || lo > best.min_ratio) {
      best = SignChoice{sp[0], sp[1], lo};
      have = true;
    }
  }
  if (!(best.min_ratio > 0.0))
    throw error(errc::elimination_failure, "no sign pair gives Re(f/g) > 0");
  return best;
}

class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual std::size_t size() const = 0;
  virtual std::string kind() const = 0;
  // M^{-1} r
  virtual Vec apply_inverse(const Vec& r) const = 0;
  // M^{-H} r (all operators are real, so this is the transpose)
  virtual Vec apply_inverse_transpose(const Vec& r) const = 0;
};

using PrecPtr = std::shared_ptr<const Preconditioner>;

class IdentityPreconditioner final : public Preconditioner {
 public:
  explicit IdentityPreconditioner(std::size_t n) : n_(n) {}
  std::size_t size() const override { return n_; }
  std::string kind() const override { return "identity"; }
  Vec apply_inverse(const Vec& r) const override { return r; }
  Vec apply_inverse_transpose(const Vec& r) const override { return r; }

 private:
  std::size_t n_;
};

// T_n(p) for a trig polynomial p, factorized once by banded LU with pivoting.
class BandPreconditioner final : public Preconditioner {
 public:
  BandPreconditioner(TrigPolynomial p, std::size_t n) : poly_(std::move(p)), n_(n) {
    coeffs_ = poly_.band_coeffs();
    d_ = (static_cast<int>(coeffs_.size()) - 1) / 2;
    bool nonzero = false;
    for (double v : coeffs_) nonzero = nonzero || v != 0.0;
    if (!nonzero) throw error(errc::singular, "zero band polynomial");
    if (static_cast<long>(n_) <= 2L * d_) throw error(errc::dimension, "n must exceed twice the band degree");
    ldab_ = 3 * d_ + 1;
    ab_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
    for (long j = 0; j < static_cast<long>(n_); ++j)
      for (long i = std::max(0L, j - d_); i <= std::min(static_cast<long>(n_) - 1, j + d_); ++i)
        ab_[static_cast<std::size_t>(2 * d_ + i - j + j * ldab_)] = t(i - j);
    ipiv_.assign(n_, 0);
    lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, static_cast<lapack_int>(n_), static_cast<lapack_int>(n_),
                                     d_, d_, ab_.data(), ldab_, ipiv_.data());
    if (info != 0) throw error(errc::singular, "singular band preconditioner");
  }

  std::size_t size() const override { return n_; }
  std::string kind() const override { return "band"; }
  const TrigPolynomial& poly() const { return poly_; }
  int bandwidth() const { return d_; }

  double t(long k) const { return std::abs(k) > d_ ? 0.0 : coeffs_[static_cast<std::size_t>(k + d_)]; }

  Vec multiply(const Vec& v) const {
    Vec out(n_, 0.0);
    for (long i = 0; i < static_cast<long>(n_); ++i)
      for (long j = std::max(0L, i - d_); j <= std::min(static_cast<long>(n_) - 1, i + d_); ++j)
        out[static_cast<std::size_t>(i)] += t(i - j) * v[static_cast<std::size_t>(j)];
    return out;
  }

  Vec apply_inverse(const Vec& r) const override { return solve(r, 'N'); }
  Vec apply_inverse_transpose(const Vec& r) const override { return solve(r, 'T'); }

 private:
  Vec solve(const Vec& r, char trans) const {
    if (r.size() != n_) throw error(errc::dimension, "band solve length mismatch");
    Vec x = r;
    lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, trans, static_cast<lapack_int>(n_), d_, d_, 1, ab_.data(),
                                     ldab_, ipiv_.data(), x.data(), static_cast<lapack_int>(n_));
    if (info != 0) throw error(errc::numeric, "band solve failed");
    return x;
  }

  TrigPolynomial poly_;
  std::size_t n_;
  Vec coeffs_;
  int d_ = 0;
  int ldab_ = 1;
  Vec ab_;
  std::vector<lapack_int> ipiv_;
};

inline PrecPtr band_preconditioner(const TrigPolynomial& p, std::size_t n) {
  return std::make_shared<BandPreconditioner>(p, n);
}

// Real circulant C = sum_j values[j] w_j w_j^H, w_j = exp(-i m theta_j)/sqrt(n),
// theta_j = 2 pi j/n; with this pairing the first column of C_n(f) is close to t_0, t_1, ...
class CirculantPreconditioner final : public Preconditioner {
 public:
  explicit CirculantPreconditioner(Vec first_column) : col_(std::move(first_column)) {
    const std::size_t n = col_.size();
    if (n == 0) throw error(errc::dimension, "empty circulant");
    mu_.assign(n, cplx{});
    for (std::size_t j = 0; j < n; ++j) mu_[j] = col_[j];
    fft::forward(mu_);
    double scale = 0.0;
    for (const auto& v : mu_) scale = std::max(scale, std::abs(v));
    for (const auto& v : mu_)
      if (std::abs(v) <= 1e-14 * scale || scale == 0.0) throw error(errc::singular, "zero circulant eigenvalue");
  }

  std::size_t size() const override { return col_.size(); }
  std::string kind() const override { return "circulant"; }
  const Vec& first_column() const { return col_; }

  // Eigenvalue attached to node theta_j.
  CVec node_values() const {
    const std::size_t n = col_.size();
    CVec v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = mu_[(n - j) % n];
    return v;
  }

  Vec multiply(const Vec& v) const { return diag_apply(v, false, false); }
  Vec apply_inverse(const Vec& r) const override { return diag_apply(r, true, false); }
  Vec apply_inverse_transpose(const Vec& r) const override { return diag_apply(r, true, true); }

 private:
  Vec diag_apply(const Vec& v, bool invert, bool transpose) const {
    const std::size_t n = col_.size();
    if (v.size() != n) throw error(errc::dimension, "circulant length mismatch");
    CVec buf(v.begin(), v.end());
    fft::forward(buf);
    for (std::size_t i = 0; i < n; ++i) {
      cplx m = transpose ? std::conj(mu_[i]) : mu_[i];
      buf[i] = invert ? buf[i] / m : buf[i] * m;
    }
    fft::backward(buf);
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = buf[i].real() / static_cast<double>(n);
    return out;
  }

  Vec col_;
  CVec mu_;
};

inline std::shared_ptr<const CirculantPreconditioner> circulant_from_values(const CVec& values) {
  const std::size_t n = values.size();
  if (n == 0) throw error(errc::dimension, "empty eigenvalue vector");
  double scale = 0.0;
  for (const auto& v : values) scale = std::max(scale, std::abs(v));
  for (const auto& v : values)
    if (!(std::abs(v) > 0.0)) throw error(errc::singular, "zero eigenvalue");
  for (std::size_t j = 1; j < n; ++j)
    if (std::abs(values[j] - std::conj(values[n - j])) > 1e-9 * scale)
      throw error(errc::non_real, "eigenvalues are not conjugate symmetric");
  CVec c = values;
  fft::forward(c);
  Vec col(n);
  double residue = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    c[r] /= static_cast<double>(n);
    col[r] = c[r].real();
    residue = std::max(residue, std::abs(c[r].imag()));
  }
  if (residue > 1e-9 * scale) throw error(errc::non_real, "complex circulant column");
  return std::make_shared<CirculantPreconditioner>(std::move(col));
}

inline std::shared_ptr<const CirculantPreconditioner> circulant_strang(const ToeplitzMatrix& T) {
  const std::size_t n = T.size();
  if (n < 2) throw error(errc::dimension, "n must be at least 2");
  Vec col(n);
  for (std::size_t k = 0; k < n; ++k)
    col[k] = k <= n / 2 ? T.t(static_cast<long>(k)) : T.t(static_cast<long>(k) - static_cast<long>(n));
  return std::make_shared<CirculantPreconditioner>(std::move(col));
}

inline std::shared_ptr<const CirculantPreconditioner> circulant_optimal(const ToeplitzMatrix& T) {
  const std::size_t n = T.size();
  if (n < 2) throw error(errc::dimension, "n must be at least 2");
  Vec col(n);
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    col[k] = ((nn - kk) * T.t(static_cast<long>(k)) + kk * T.t(static_cast<long>(k) - static_cast<long>(n))) / nn;
  }
  return std::make_shared<CirculantPreconditioner>(std::move(col));
}

// M = T_n(g) C; M^{-1} r = C^{-1} T_n(g)^{-1} r.
class CompositePreconditioner final : public Preconditioner {
 public:
  CompositePreconditioner(std::shared_ptr<const BandPreconditioner> band,
                          std::shared_ptr<const CirculantPreconditioner> circ)
      : band_(std::move(band)), circ_(std::move(circ)) {
    if (band_->size() != circ_->size()) throw error(errc::dimension, "composite parts differ in size");
  }
  std::size_t size() const override { return band_->size(); }
  std::string kind() const override { return "composite"; }
  const BandPreconditioner& band() const { return *band_; }
  const CirculantPreconditioner& circulant() const { return *circ_; }

  Vec apply_inverse(const Vec& r) const override { return circ_->apply_inverse(band_->apply_inverse(r)); }
  Vec apply_inverse_transpose(const Vec& r) const override {
    return band_->apply_inverse_transpose(circ_->apply_inverse_transpose(r));
  }

 private:
  std::shared_ptr<const BandPreconditioner> band_;
  std::shared_ptr<const CirculantPreconditioner> circ_;
};

inline Vec composite_apply_inverse(const CompositePreconditioner& P, const Vec& r, bool conj_transpose) {
  return conj_transpose ? P.apply_inverse_transpose(r) : P.apply_inverse(r);
}

// Replaces flagged entries by the mean of the nearest unflagged cyclic
// neighbours, then restores conjugate symmetry.
inline CVec shift_pole_values(const CVec& values, const std::vector<std::size_t>& poles) {
  const std::size_t n = values.size();
  std::vector<bool> flagged(n, false);
  for (std::size_t p : poles) {
    if (p >= n) throw error(errc::dimension, "pole index out of range");
    flagged[p] = true;
  }
  std::size_t count = 0;
  for (bool f : flagged) count += f ? 1 : 0;
  if (count == n && n > 0) throw error(errc::singular, "every value is flagged as a pole");
  if (count == 0) return values;

  CVec out = values;
  for (std::size_t j = 0; j < n; ++j) {
    if (!flagged[j]) continue;
    std::size_t lo = (j + n - 1) % n, hi = (j + 1) % n;
    while (flagged[lo]) lo = (lo + n - 1) % n;
    while (flagged[hi]) hi = (hi + 1) % n;
    out[j] = (values[lo] + values[hi]) / 2.0;
  }
  CVec sym = out;
  for (std::size_t j = 0; j < n; ++j) sym[j] = (out[j] + std::conj(out[(n - j) % n])) / 2.0;
  return sym;
}

}  // namespace toep
