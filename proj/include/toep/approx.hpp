#pragma once

// Trigonometric polynomials, Chebyshev grids, discrete Remez exchange and
// trigonometric interpolation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>

#include "toep/types.hpp"

namespace toep {

// p(x) = sum_k even[k] cos(kx) + i sum_k odd[k] sin(kx); odd[0] is kept at 0.
struct TrigPolynomial {
  Vec even{0.0};
  Vec odd{0.0};

  static TrigPolynomial constant(double a0) { return TrigPolynomial{Vec{a0}, Vec{0.0}}; }

  static int trimmed_degree(const Vec& c) {
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k)
      if (std::abs(c[static_cast<std::size_t>(k)]) > 1e-14) return k;
    return 0;
  }
  int degree_even() const { return trimmed_degree(even); }
  int degree_odd() const { return trimmed_degree(odd); }
  int degree() const { return std::max(degree_even(), degree_odd()); }

  double a(int k) const {
    return k >= 0 && k < static_cast<int>(even.size()) ? even[static_cast<std::size_t>(k)] : 0.0;
  }
  double b(int k) const {
    return k >= 1 && k < static_cast<int>(odd.size()) ? odd[static_cast<std::size_t>(k)] : 0.0;
  }

  double real_part(double x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < even.size(); ++k) s += even[k] * std::cos(static_cast<double>(k) * x);
    return s;
  }
  double imag_part(double x) const {
    double s = 0.0;
    for (std::size_t k = 1; k < odd.size(); ++k) s += odd[k] * std::sin(static_cast<double>(k) * x);
    return s;
  }
  cplx operator()(double x) const { return {real_part(x), imag_part(x)}; }

  // Fourier coefficients t_{-d}..t_d with d = degree().
  Vec band_coeffs() const {
    const int d = degree();
    Vec t(static_cast<std::size_t>(2 * d + 1), 0.0);
    t[static_cast<std::size_t>(d)] = a(0);
    for (int k = 1; k <= d; ++k) {
      t[static_cast<std::size_t>(d + k)] = (a(k) + b(k)) / 2.0;
      t[static_cast<std::size_t>(d - k)] = (a(k) - b(k)) / 2.0;
    }
    return t;
  }

  // Inverse of band_coeffs; t has odd length 2d+1.
  static TrigPolynomial from_band(const Vec& t) {
    const std::size_t d = (t.size() - 1) / 2;
    TrigPolynomial p;
    p.even.assign(d + 1, 0.0);
    p.odd.assign(d + 1, 0.0);
    p.even[0] = t[d];
    for (std::size_t k = 1; k <= d; ++k) {
      p.even[k] = t[d + k] + t[d - k];
      p.odd[k] = t[d + k] - t[d - k];
    }
    return p;
  }
};

inline cplx eval(const TrigPolynomial& p, double x) { return p(x); }

inline Vec band_coeffs(const TrigPolynomial& p) { return p.band_coeffs(); }

// Complex product, done as a convolution of the exponential coefficients.
inline TrigPolynomial product(const TrigPolynomial& p, const TrigPolynomial& q) {
  Vec u = p.band_coeffs(), v = q.band_coeffs();
  Vec w(u.size() + v.size() - 1, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) w[i + j] += u[i] * v[j];
  TrigPolynomial r = TrigPolynomial::from_band(w);
  const int de = r.degree_even(), dd = r.degree_odd();
  r.even.resize(static_cast<std::size_t>(de + 1));
  r.odd.resize(static_cast<std::size_t>(dd + 1));
  return r;
}

// k first-kind Chebyshev points mapped to [0, c], increasing.
inline Vec chebyshev_nodes(int k, double c = pi) {
  if (k < 1) throw error(errc::dimension, "need at least one Chebyshev node");
  Vec x(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j)
    x[static_cast<std::size_t>(j - 1)] =
        (c / 2.0) * (std::cos((2.0 * (k - j) + 1.0) * pi / (2.0 * k)) + 1.0);
  return x;
}

enum class Parity { even, odd };

struct ApproxResult {
  TrigPolynomial poly;
  double max_error = 0.0;
  Vec nodes_used;       // reference set at termination
  Vec reference_error;  // signed residual on the reference set
  int iterations = 0;
};

struct RemezConfig {
  int grid = 512;
  int max_exchanges = 100;
  double tol = 1e-10;
};

namespace detail {

inline double basis(Parity parity, int i, double x) {
  return parity == Parity::even ? std::cos(i * x) : std::sin((i + 1) * x);
}

inline TrigPolynomial poly_from(Parity parity, const Eigen::VectorXd& c, int m) {
  TrigPolynomial p;
  if (parity == Parity::even) {
    p.even.assign(static_cast<std::size_t>(std::max(m, 1)), 0.0);
    for (int i = 0; i < m; ++i) p.even[static_cast<std::size_t>(i)] = c(i);
  } else {
    p.odd.assign(static_cast<std::size_t>(m + 1), 0.0);
    for (int i = 0; i < m; ++i) p.odd[static_cast<std::size_t>(i + 1)] = c(i);
  }
  return p;
}

inline double eval_part(const TrigPolynomial& p, Parity parity, double x) {
  return parity == Parity::even ? p.real_part(x) : p.imag_part(x);
}

// Alternating run extrema of err, thinned to exactly r points.
inline std::vector<std::size_t> exchange(const Vec& err, std::size_t r) {
  std::vector<std::size_t> ext;
  int run_sign = 0;
  for (std::size_t j = 0; j < err.size(); ++j) {
    int s = err[j] > 0 ? 1 : (err[j] < 0 ? -1 : 0);
    if (s == 0) continue;
    if (s != run_sign) {
      ext.push_back(j);
      run_sign = s;
    } else if (std::abs(err[j]) > std::abs(err[ext.back()])) {
      ext.back() = j;
    }
  }
  auto mag = [&](std::size_t i) { return std::abs(err[ext[i]]); };
  while (ext.size() > r) {
    if (ext.size() == r + 1) {
      if (mag(ext.size() - 1) <= mag(0))
        ext.pop_back();
      else
        ext.erase(ext.begin());
      continue;
    }
    std::size_t lo = 0;
    for (std::size_t i = 1; i < ext.size(); ++i)
      if (mag(i) < mag(lo)) lo = i;
    if (lo == 0 || lo + 1 == ext.size()) {
      ext.erase(ext.begin() + static_cast<long>(lo));
      continue;
    }
    // dropping an interior point leaves two same-sign neighbours; keep the larger
    std::size_t drop = mag(lo - 1) >= mag(lo + 1) ? lo + 1 : lo - 1;
    std::size_t first = std::min(lo, drop);
    ext.erase(ext.begin() + static_cast<long>(first), ext.begin() + static_cast<long>(first + 2));
  }
  return ext;
}

}  // namespace detail

// Discrete best uniform approximation on explicit nodes.
inline ApproxResult remez_on_nodes(std::span<const double> nodes_in, std::span<const double> values_in,
                                   int degree, Parity parity, const RemezConfig& cfg = {}) {
  if (degree < 0) throw error(errc::dimension, "negative degree");
  Vec x, f;
  for (std::size_t j = 0; j < nodes_in.size(); ++j) {
    if (parity == Parity::odd && std::abs(nodes_in[j]) < 1e-14) continue;
    if (!std::isfinite(values_in[j])) throw error(errc::evaluation, "non-finite sample");
    x.push_back(nodes_in[j]);
    f.push_back(values_in[j]);
  }
  const int m = parity == Parity::even ? degree + 1 : degree;
  const std::size_t r = static_cast<std::size_t>(m + 1);
  if (x.size() < r) throw error(errc::insufficient_nodes, "fewer usable nodes than reference size");

  ApproxResult res;
  if (m == 0) {
    res.poly = TrigPolynomial{};
    std::size_t arg = 0;
    for (std::size_t j = 0; j < f.size(); ++j)
      if (std::abs(f[j]) > std::abs(f[arg])) arg = j;
    res.max_error = std::abs(f[arg]);
    res.nodes_used = {x[arg]};
    res.reference_error = {f[arg]};
    return res;
  }

  std::vector<std::size_t> ref(r);
  for (std::size_t i = 0; i < r; ++i)
    ref[i] = static_cast<std::size_t>(std::lround(static_cast<double>(i) * static_cast<double>(x.size() - 1) /
                                                  static_cast<double>(r - 1)));

  double scale = 0.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  Vec err(x.size());
  for (int it = 1; it <= cfg.max_exchanges; ++it) {
    Eigen::MatrixXd A(r, r);
    Eigen::VectorXd rhs(r);
    for (std::size_t i = 0; i < r; ++i) {
      for (int k = 0; k < m; ++k) A(i, k) = detail::basis(parity, k, x[ref[i]]);
      A(i, m) = (i % 2 == 0) ? 1.0 : -1.0;
      rhs(i) = f[ref[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) throw error(errc::singular, "singular Remez reference system");
    Eigen::VectorXd sol = lu.solve(rhs);
    sol += lu.solve(rhs - A * sol);  // one refinement step; the basis is ill-conditioned at high degree
    const double level = std::abs(sol(m));
    TrigPolynomial p = detail::poly_from(parity, sol, m);

    double maxerr = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      err[j] = f[j] - detail::eval_part(p, parity, x[j]);
      maxerr = std::max(maxerr, std::abs(err[j]));
    }
    res.poly = p;
    res.iterations = it;
    res.max_error = maxerr;
    res.nodes_used.clear();
    res.reference_error.clear();
    for (std::size_t i : ref) {
      res.nodes_used.push_back(x[i]);
      res.reference_error.push_back(err[i]);
    }
    if (maxerr <= level * (1.0 + cfg.tol) + 1e-14 * scale) return res;

    std::vector<std::size_t> next = detail::exchange(err, r);
    if (next.size() < r || next == ref) return res;
    ref = next;
  }
  throw error(errc::non_convergence, "Remez exchange did not converge");
}

inline ApproxResult remez(const std::function<double(double)>& target, int degree, Parity parity,
                          double c = pi, const RemezConfig& cfg = {}) {
  Vec x = chebyshev_nodes(cfg.grid, c);
  Vec f(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) f[j] = target(x[j]);
  return remez_on_nodes(x, f, degree, parity, cfg);
}

// Number of sign alternations with equal magnitude (relative tol) on the reference set.
inline int equioscillation_count(const ApproxResult& r, double rel = 1e-8) {
  if (r.reference_error.empty()) return 0;
  double level = 0.0;
  for (double e : r.reference_error) level = std::max(level, std::abs(e));
  int count = 1;
  for (std::size_t i = 1; i < r.reference_error.size(); ++i) {
    double a = r.reference_error[i - 1], b = r.reference_error[i];
    bool alternates = (a > 0) != (b > 0);
    bool leveled = std::abs(std::abs(b) - level) <= rel * std::max(level, 1e-300);
    if (!alternates || !leveled) return count;
    ++count;
  }
  return count;
}

// Trig interpolation at Chebyshev nodes: d+1 nodes on [0,pi] for the even
// part; node 0 plus d nodes on [0,c] for the odd part (sin vanishes at 0).
inline TrigPolynomial interpolate(const std::function<double(double)>& target, int degree, Parity parity,
                                  double c = pi) {
  if (degree < 0) throw error(errc::dimension, "negative degree");
  const int m = parity == Parity::even ? degree + 1 : degree;
  if (m == 0) return TrigPolynomial{};
  Vec x = chebyshev_nodes(m, parity == Parity::even ? pi : c);
  Eigen::MatrixXd A(m, m);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) A(i, k) = detail::basis(parity, k, x[static_cast<std::size_t>(i)]);
    rhs(i) = target(x[static_cast<std::size_t>(i)]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw error(errc::singular, "singular interpolation system");
  return detail::poly_from(parity, lu.solve(rhs), m);
}

// Joins an even (cosine) and an odd (sine) approximation into q = q1 + i q2.
inline TrigPolynomial combine(const TrigPolynomial& even_part, const TrigPolynomial& odd_part) {
  return TrigPolynomial{even_part.even, odd_part.odd};
}

}  // namespace toep
