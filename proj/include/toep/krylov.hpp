#pragma once

// Left-preconditioned GMRES and CGNR. Stopping uses the true residual or the
// preconditioned one, both recomputed from the iterate.

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>

#include "toep/core.hpp"
#include "toep/precond.hpp"

namespace toep {

using LinearOperator = std::function<Vec(const Vec&)>;

enum class Method { gmres, cgn };

// What b is in an experiment: T*ones (known solution) or ones itself.
enum class RhsKind { exact_ones, ones };

// Which relative residual the stopping test reads. For GMRES `preconditioned`
// is ||M^{-1} r_k|| / ||M^{-1} r_0||; for CGNR it is the normal-equations
// residual ||B^T M^{-1} r_k|| / ||B^T M^{-1} r_0|| with B = M^{-1} A.
enum class ResidualMode { true_residual, preconditioned };

struct SolveConfig {
  double tol = 1e-6;
  ResidualMode residual = ResidualMode::true_residual;
  std::optional<std::size_t> max_iters;  // defaults to n
  Method method = Method::gmres;
  RhsKind rhs = RhsKind::exact_ones;
};

struct SolveReport {
  std::size_t iterations = 0;
  Vec residual_history;        // true relative residuals, entry 0 is the start
  Vec preconditioned_history;  // ||M^{-1} r_k|| relative to its start value
  bool converged = false;
  Vec solution;
  double wall_seconds = 0.0;
  std::optional<double> error_inf;  // ||x - 1||_inf when the solution is known
};

namespace detail {

inline double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec residual(const LinearOperator& A, const Vec& b, const Vec& x) {
  Vec r = A(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

inline void check_finite(double v) {
  if (!std::isfinite(v)) throw error(errc::numeric, "non-finite value in Krylov recurrence");
}

}  // namespace detail

inline void validate(const SolveConfig& cfg) {
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw error(errc::usage, "tol must lie in (0, 1)");
}

// Full GMRES on M^{-1} A x = M^{-1} b (modified Gram-Schmidt, Givens rotations).
inline SolveReport pgmres(const LinearOperator& A, const LinearOperator& Minv, const Vec& b, const Vec& x0,
                          const SolveConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = b.size();
  if (x0.size() != n) throw error(errc::dimension, "x0 length mismatch");
  const std::size_t max_it = cfg.max_iters.value_or(n);

  SolveReport rep;
  rep.solution = x0;
  const Vec r0 = detail::residual(A, b, x0);
  const double rnorm0 = detail::norm2(r0);
  rep.residual_history.push_back(1.0);
  auto finish = [&]() {
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  };
  if (rnorm0 == 0.0) {
    rep.converged = true;
    return finish();
  }
  Vec z = Minv(r0);
  const double beta = detail::norm2(z);
  detail::check_finite(beta);
  rep.preconditioned_history.push_back(1.0);

  std::vector<Vec> V;
  V.reserve(max_it + 1);
  for (double& v : z) v /= beta;
  V.push_back(z);
  std::vector<Vec> R;  // column k holds the rotated Hessenberg entries 0..k+1
  Vec cs, sn, g{beta};

  auto form_solution = [&](std::size_t k) {
    Vec y(k);
    for (std::size_t i = k; i-- > 0;) {
      double s = g[i];
      for (std::size_t j = i + 1; j < k; ++j) s -= R[j][i] * y[j];
      y[i] = s / R[i][i];
    }
    Vec x = x0;
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < n; ++i) x[i] += y[j] * V[j][i];
    return x;
  };

  for (std::size_t k = 0; k < max_it; ++k) {
    Vec w = Minv(A(V[k]));
    const double wnorm = detail::norm2(w);
    Vec h(k + 2, 0.0);
    for (std::size_t i = 0; i <= k; ++i) {
      h[i] = detail::dot(w, V[i]);
      for (std::size_t q = 0; q < n; ++q) w[q] -= h[i] * V[i][q];
    }
    const double hk = detail::norm2(w);
    detail::check_finite(hk);
    h[k + 1] = hk;
    for (std::size_t i = 0; i < k; ++i) {
      const double a = h[i], c = h[i + 1];
      h[i] = cs[i] * a + sn[i] * c;
      h[i + 1] = -sn[i] * a + cs[i] * c;
    }
    const double a = h[k], c = h[k + 1];
    const double den = std::hypot(a, c);
    cs.push_back(den == 0.0 ? 1.0 : a / den);
    sn.push_back(den == 0.0 ? 0.0 : c / den);
    h[k] = den;
    h[k + 1] = 0.0;
    R.push_back(std::move(h));
    g.push_back(-sn[k] * g[k]);
    g[k] = cs[k] * g[k];

    Vec x = form_solution(k + 1);
    const Vec r = detail::residual(A, b, x);
    const double rel = detail::norm2(r) / rnorm0;
    const double prel = detail::norm2(Minv(r)) / beta;
    detail::check_finite(rel);
    detail::check_finite(prel);
    rep.residual_history.push_back(rel);
    rep.preconditioned_history.push_back(prel);
    rep.solution = x;
    rep.iterations = k + 1;
    if ((cfg.residual == ResidualMode::true_residual ? rel : prel) <= cfg.tol) {
      rep.converged = true;
      return finish();
    }
    const bool breakdown = hk <= 1e-14 * std::max(wnorm, 1e-300);
    if (breakdown) throw error(errc::breakdown, "Arnoldi breakdown before reaching tolerance");
    Vec next = w;
    for (double& v : next) v /= hk;
    V.push_back(std::move(next));
  }
  return finish();
}

// CG on the normal equations of B = M^{-1} A (CGNR form).
inline SolveReport pcgn(const LinearOperator& A, const LinearOperator& AT, const LinearOperator& Minv,
                        const LinearOperator& MinvT, const Vec& b, const Vec& x0, const SolveConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = b.size();
  if (x0.size() != n) throw error(errc::dimension, "x0 length mismatch");
  const std::size_t max_it = cfg.max_iters.value_or(n);
  auto B = [&](const Vec& v) { return Minv(A(v)); };
  auto BT = [&](const Vec& v) { return AT(MinvT(v)); };

  SolveReport rep;
  rep.solution = x0;
  const double bnorm = detail::norm2(b);
  auto finish = [&]() {
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  };
  const Vec r0 = detail::residual(A, b, x0);
  const double rel0 = bnorm == 0.0 ? 0.0 : detail::norm2(r0) / bnorm;
  rep.residual_history.push_back(rel0);
  rep.preconditioned_history.push_back(1.0);
  if (rel0 <= cfg.tol) {
    rep.converged = true;
    return finish();
  }

  Vec x = x0;
  Vec r = Minv(r0);
  Vec z = BT(r);
  Vec p = z;
  double zz = detail::dot(z, z);
  const double z0 = std::sqrt(zz);
  for (std::size_t k = 0; k < max_it; ++k) {
    Vec w = B(p);
    const double ww = detail::dot(w, w);
    detail::check_finite(ww);
    if (ww == 0.0) throw error(errc::breakdown, "zero curvature in CGNR");
    const double alpha = zz / ww;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * w[i];
    }
    z = BT(r);
    const double zz_new = detail::dot(z, z);
    const double rel = detail::norm2(detail::residual(A, b, x)) / bnorm;
    const double prel = std::sqrt(zz_new) / z0;
    detail::check_finite(rel);
    detail::check_finite(prel);
    rep.residual_history.push_back(rel);
    rep.preconditioned_history.push_back(prel);
    rep.solution = x;
    rep.iterations = k + 1;
    if ((cfg.residual == ResidualMode::true_residual ? rel : prel) <= cfg.tol) {
      rep.converged = true;
      return finish();
    }
    const double beta = zz_new / zz;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    zz = zz_new;
  }
  return finish();
}

// Solves T x = b from x0 = 0 with b = T*ones (or b = ones) and records the solution error.
inline SolveReport experiment(const ToeplitzMatrix& T, const Preconditioner& M, const SolveConfig& cfg) {
  const std::size_t n = T.size();
  if (M.size() != n) throw error(errc::dimension, "preconditioner size mismatch");
  const Vec ones(n, 1.0);
  const Vec b = cfg.rhs == RhsKind::exact_ones ? T.multiply(ones) : ones;
  const Vec x0(n, 0.0);
  LinearOperator A = [&](const Vec& v) { return T.multiply(v); };
  LinearOperator AT = [&](const Vec& v) { return T.multiply(v, true); };
  LinearOperator Mi = [&](const Vec& v) { return M.apply_inverse(v); };
  LinearOperator MiT = [&](const Vec& v) { return M.apply_inverse_transpose(v); };
  SolveReport rep = cfg.method == Method::gmres ? pgmres(A, Mi, b, x0, cfg) : pcgn(A, AT, Mi, MiT, b, x0, cfg);
  if (cfg.rhs == RhsKind::exact_ones) {
    double e = 0.0;
    for (double v : rep.solution) e = std::max(e, std::abs(v - 1.0));
    rep.error_inf = e;
  }
  return rep;
}

}  // namespace toep
