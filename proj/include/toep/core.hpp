#pragma once

// Generating symbols, Toeplitz matrices, Fourier coefficients and fast
// matrix-vector products.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "toep/fft.hpp"
#include "toep/types.hpp"

namespace toep {

// f = f1 + i f2 with f1 even and f2 odd, given on (-pi, pi].
struct GeneratingSymbol {
  std::string name;
  std::function<double(double)> real_part;
  std::function<double(double)> imag_part;
  // Points of (-pi, pi] where either part is non-smooth or discontinuous.
  std::vector<double> breakpoints;

  cplx operator()(double x) const { return {real_part(x), imag_part(x)}; }

  // Evaluates after reducing x into (-pi, pi].
  cplx eval(double x) const {
    double y = std::remainder(x, 2.0 * pi);
    if (y <= -pi) y += 2.0 * pi;
    return (*this)(y);
  }
};

// Largest parity defect of the two parts on an equispaced grid of m points.
inline double parity_defect(const GeneratingSymbol& f, int m = 1001) {
  double worst = std::abs(f.imag_part(0.0));
  for (int j = 1; j <= m; ++j) {
    double x = pi * j / (m + 1);
    double a = f.real_part(x), b = f.real_part(-x);
    double c = f.imag_part(x), d = f.imag_part(-x);
    worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
    worst = std::max(worst, std::abs(c + d) / (1.0 + std::abs(c)));
  }
  return worst;
}

struct QuadratureConfig {
  std::size_t min_samples = std::size_t{1} << 16;
  std::size_t samples_per_dim = 64;
};

namespace detail {

// exp(i * h * q) with the argument reduced in extended precision.
inline cplx unit_phase(long double h, long double q) {
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  long double a = std::fmod(h * q, two_pi);
  return std::polar(1.0, static_cast<double>(a));
}

// S_m = sum_{j=0}^{N} c_j exp(-i (m - shift) h j), m = 0..K-1 (chirp-z transform).
inline CVec chirp_sums(const CVec& c, long double h, std::int64_t shift, std::size_t K) {
  const std::size_t N = c.size() - 1;
  const std::size_t L = fft::next_pow2(N + K + 1);
  CVec A(L, cplx{}), B(L, cplx{});
  for (std::size_t j = 0; j <= N; ++j) {
    auto jj = static_cast<std::int64_t>(j);
    // shift*j - j^2/2, kept in half units to stay integral
    long double q = static_cast<long double>(2 * shift * jj - jj * jj) / 2.0L;
    A[j] = c[j] * unit_phase(h, q);
  }
  for (std::size_t l = 0; l < K; ++l) {
    auto ll = static_cast<std::int64_t>(l);
    B[l] = unit_phase(h, static_cast<long double>(ll * ll) / 2.0L);
  }
  for (std::size_t l = 1; l <= N; ++l) {
    auto ll = static_cast<std::int64_t>(l);
    B[L - l] = unit_phase(h, static_cast<long double>(ll * ll) / 2.0L);
  }
  fft::forward(A);
  fft::forward(B);
  for (std::size_t i = 0; i < L; ++i) A[i] *= B[i];
  fft::backward(A);
  CVec out(K);
  for (std::size_t m = 0; m < K; ++m) {
    auto mm = static_cast<std::int64_t>(m);
    out[m] = A[m] / static_cast<double>(L) *
             unit_phase(h, -static_cast<long double>(mm * mm) / 2.0L);
  }
  return out;
}

}  // namespace detail

// t_k = (1/2pi) int f(x) exp(-ikx) dx for k = -(n-1)..n-1, stored at index k + n - 1.
// Composite Simpson on each smooth piece, evaluated for all k by a chirp-z FFT.
inline Vec fourier_coefficients(const GeneratingSymbol& f, std::size_t n,
                                const QuadratureConfig& quad = {}) {
  if (n == 0) throw error(errc::dimension, "n must be positive");
  const std::size_t N = fft::next_pow2(std::max(quad.min_samples, quad.samples_per_dim * n));
  const std::size_t K = 2 * n - 1;

  std::vector<double> edges{-pi};
  for (double b : f.breakpoints)
    if (b > -pi && b < pi) edges.push_back(b);
  edges.push_back(pi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  CVec total(K, cplx{});
  double fmax = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const long double a = edges[p], b = edges[p + 1];
    const long double h = (b - a) / static_cast<long double>(N);
    CVec c(N + 1);
    for (std::size_t j = 0; j <= N; ++j) {
      double x = j == N ? static_cast<double>(b) : static_cast<double>(a + h * j);
      cplx v = f(x);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw error(errc::evaluation, "non-finite symbol value at x=" + std::to_string(x));
      fmax = std::max(fmax, std::abs(v));
      double w = (j == 0 || j == N) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      c[j] = v * (w * static_cast<double>(h) / 3.0);
    }
    CVec s = detail::chirp_sums(c, h, static_cast<std::int64_t>(n) - 1, K);
    for (std::size_t m = 0; m < K; ++m) {
      long double k = static_cast<long double>(m) - static_cast<long double>(n - 1);
      total[m] += s[m] * detail::unit_phase(-a, k);
    }
  }

  Vec t(K);
  double residue = 0.0;
  for (std::size_t m = 0; m < K; ++m) {
    cplx v = total[m] / (2.0 * pi);
    t[m] = v.real();
    residue = std::max(residue, std::abs(v.imag()));
  }
  if (residue > 1e-10 * std::max(fmax, 1.0))
    throw error(errc::parity, "imaginary residue " + std::to_string(residue) + " in Fourier coefficients of " + f.name);
  return t;
}

// Real Toeplitz matrix with entry (j,q) = t_{j-q}; immutable once built.
class ToeplitzMatrix {
 public:
  ToeplitzMatrix() = default;

  // diagonals = t_{-(n-1)}, ..., t_{n-1}
  explicit ToeplitzMatrix(Vec diagonals) : diag_(std::move(diagonals)) {
    if (diag_.empty() || diag_.size() % 2 == 0)
      throw error(errc::dimension, "diagonal vector must have odd length 2n-1");
    for (double v : diag_)
      if (!std::isfinite(v)) throw error(errc::numeric, "non-finite diagonal value");
    n_ = (diag_.size() + 1) / 2;
    m_ = fft::next_pow2(2 * n_);
    spectrum_.assign(m_, cplx{});
    for (std::size_t j = 0; j < n_; ++j) spectrum_[j] = t(static_cast<long>(j));
    for (std::size_t j = 1; j < n_; ++j) spectrum_[m_ - j] = t(-static_cast<long>(j));
    fft::forward(spectrum_);
  }

  static ToeplitzMatrix from_symbol(const GeneratingSymbol& f, std::size_t n,
                                    const QuadratureConfig& quad = {}) {
    return ToeplitzMatrix(fourier_coefficients(f, n, quad));
  }

  std::size_t size() const { return n_; }
  const Vec& diagonals() const { return diag_; }

  double t(long k) const {
    auto nn = static_cast<long>(n_);
    if (k <= -nn || k >= nn) return 0.0;
    return diag_[static_cast<std::size_t>(k + nn - 1)];
  }

  double operator()(std::size_t j, std::size_t q) const {
    return t(static_cast<long>(j) - static_cast<long>(q));
  }

  // Row-sum norm.
  double norm_inf() const {
    double best = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      double s = 0.0;
      for (std::size_t q = 0; q < n_; ++q) s += std::abs((*this)(j, q));
      best = std::max(best, s);
    }
    return best;
  }

  Vec multiply(const Vec& v, bool transpose = false) const {
    if (v.size() != n_) throw error(errc::dimension, "matvec length mismatch");
    CVec buf(m_, cplx{});
    for (std::size_t j = 0; j < n_; ++j) buf[j] = v[j];
    fft::forward(buf);
    for (std::size_t i = 0; i < m_; ++i)
      buf[i] *= transpose ? std::conj(spectrum_[i]) : spectrum_[i];
    fft::backward(buf);
    Vec out(n_);
    const double scale = 1.0 / static_cast<double>(m_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = buf[j].real() * scale;
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  Vec diag_;
  CVec spectrum_;
};

inline Vec toeplitz_matvec(const ToeplitzMatrix& T, const Vec& v, bool transpose = false) {
  return T.multiply(v, transpose);
}

inline Eigen::MatrixXd dense(const ToeplitzMatrix& T, std::size_t cap = 4096) {
  const std::size_t n = T.size();
  if (n > cap) throw error(errc::cap_exceeded, "dense realization above cap");
  Eigen::MatrixXd A(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t q = 0; q < n; ++q) A(j, q) = T(j, q);
  return A;
}

// (S1, S2): symmetric and antisymmetric parts of the leading k x k block.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> leading_parts(const ToeplitzMatrix& T,
                                                                 std::size_t k) {
  if (k > T.size()) throw error(errc::dimension, "leading block larger than matrix");
  Eigen::MatrixXd A(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t q = 0; q < k; ++q) A(j, q) = T(j, q);
  Eigen::MatrixXd S1 = (A + A.transpose()) / 2.0;
  Eigen::MatrixXd S2 = (A - A.transpose()) / 2.0;
  return {S1, S2};
}

}  // namespace toep
