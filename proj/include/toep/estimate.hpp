#pragma once

// Symbol estimation from the matrix entries alone: Fourier expansion on a
// grid, roots, jumps, multiplicities, and the two automatic preconditioners.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

#include "toep/approx.hpp"
#include "toep/core.hpp"
#include "toep/precond.hpp"

namespace toep {

enum class GridKind { band, circ };

inline const char* to_string(GridKind g) { return g == GridKind::band ? "band" : "circ"; }

struct SymbolEstimate {
  GridKind grid = GridKind::band;
  std::size_t n = 0;
  Vec theta;    // nodes; the circgrid is stored on [0, 2pi)
  CVec values;  // F_{n-1}(theta_j)
  double h = 0.0;
  std::optional<cplx> origin;  // F_{n-1}(0), kept for the bandgrid, which has no node at 0
};

// F_{n-1}(x) = sum_k t_k exp(ikx) by direct summation.
inline cplx expansion_at(const ToeplitzMatrix& T, double x) {
  const long n = static_cast<long>(T.size());
  cplx s = T.t(0);
  for (long k = 1; k < n; ++k) {
    const double c = std::cos(static_cast<double>(k) * x), si = std::sin(static_cast<double>(k) * x);
    s += cplx((T.t(k) + T.t(-k)) * c, (T.t(k) - T.t(-k)) * si);
  }
  return s;
}

inline SymbolEstimate fourier_expansion(const ToeplitzMatrix& T, GridKind grid) {
  const std::size_t n = T.size();
  const std::size_t L = grid == GridKind::band ? n + 1 : n;
  const long nl = static_cast<long>(n), ll = static_cast<long>(L);
  CVec a(L, cplx{});
  for (long k = -(nl - 1); k <= nl - 1; ++k) {
    double v = T.t(k);
    if (grid == GridKind::band && (k % 2 != 0)) v = -v;  // exp(-ik pi)
    a[static_cast<std::size_t>(((k % ll) + ll) % ll)] += v;
  }
  fft::backward(a);
  SymbolEstimate est;
  est.grid = grid;
  est.n = n;
  est.h = 2.0 * pi / static_cast<double>(L);
  est.theta.resize(n);
  est.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (grid == GridKind::band) {
      est.theta[j] = -pi + static_cast<double>(j + 1) * est.h;
      est.values[j] = a[j + 1];
    } else {
      est.theta[j] = static_cast<double>(j) * est.h;
      est.values[j] = a[j];
    }
  }
  if (grid == GridKind::band) est.origin = expansion_at(T, 0.0);
  return est;
}

inline double part_of(const cplx& v, int part) { return part == 1 ? v.real() : v.imag(); }

// Maps an angle into (-pi, pi].
inline double wrap_angle(double x) {
  double y = std::remainder(x, 2.0 * pi);
  if (y <= -pi) y += 2.0 * pi;
  return y;
}

struct Interval {
  double lo = 0.0;  // on the grid's own coordinates; hi may pass the period end
  double hi = 0.0;
  int part = 1;
  bool contains(double x) const {
    for (double shift : {-2.0 * pi, 0.0, 2.0 * pi})
      if (x + shift >= lo && x + shift <= hi) return true;
    return false;
  }
  double distance(double x) const {
    if (contains(x)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (double shift : {-2.0 * pi, 0.0, 2.0 * pi}) {
      d = std::min(d, std::abs(x + shift - lo));
      d = std::min(d, std::abs(x + shift - hi));
    }
    return d;
  }
};

struct DiscontinuityConfig {
  double median_factor = 10.0;
  double delta = 0.05;
};

// Cyclic gaps between consecutive nodes (the bandgrid skips pi, so its wrap gap is 2h).
inline double node_gap(const SymbolEstimate& est, std::size_t j) {
  const std::size_t n = est.n;
  if (j + 1 < n) return est.theta[j + 1] - est.theta[j];
  return est.theta[0] + 2.0 * pi - est.theta[n - 1];
}

inline std::vector<Interval> detect_discontinuities(const SymbolEstimate& est, const DiscontinuityConfig& cfg = {}) {
  std::vector<Interval> out;
  const std::size_t n = est.n;
  if (n < 3) return out;
  for (int part = 1; part <= 2; ++part) {
    Vec ratio(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = part_of(est.values[j], part), b = part_of(est.values[(j + 1) % n], part);
      ratio[j] = std::abs(b - a) / node_gap(est, j);
    }
    Vec sorted = ratio;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(n / 2), sorted.end());
    const double thr = std::max(cfg.median_factor * sorted[n / 2], cfg.delta * static_cast<double>(n));
    std::vector<Interval> mine;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(ratio[j] > thr)) continue;
      const double lo = est.theta[j], hi = est.theta[j] + node_gap(est, j);
      if (!mine.empty() && std::abs(mine.back().hi - lo) < 1e-12)
        mine.back().hi = hi;
      else
        mine.push_back(Interval{lo, hi, part});
    }
    // a run that wraps around the period end joins the first one
    if (mine.size() >= 2 && std::abs(mine.back().hi - 2.0 * pi - mine.front().lo) < 1e-12) {
      mine.front().lo = mine.back().lo - 2.0 * pi;
      mine.pop_back();
    }
    out.insert(out.end(), mine.begin(), mine.end());
  }
  return out;
}

struct RootCandidate {
  double location = 0.0;  // in (-pi, pi]
  bool from_real_part = false;
  bool from_imag_part = false;
  cplx value_at{};
};

struct RootDetectConfig {
  double tau = 1e-6;
  int cluster_steps = 5;      // candidates of one part this many steps apart collapse
  double zero_radius = 0.1;   // candidates this close to 0 are taken as the root at 0
  double equal_rel = 1e-8;    // "near-equal" neighbours collapse to their midpoint
  bool sign_changes = true;   // also accept crossings between adjacent nodes
};

namespace detail {

struct PartCandidate {
  double location;
  cplx value;
};

// Nearest grid node to x (cyclic); returns its index.
inline std::size_t nearest_node(const SymbolEstimate& est, double x) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < est.n; ++j) {
    const double d = std::abs(wrap_angle(est.theta[j] - x));
    if (d < bd) {
      bd = d;
      best = j;
    }
  }
  return best;
}

inline std::vector<PartCandidate> part_roots(const SymbolEstimate& est, int part, const std::vector<Interval>& jumps,
                                             const RootDetectConfig& cfg) {
  const std::size_t n = est.n;
  Vec u(n);
  double umax = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = part_of(est.values[j], part);
    umax = std::max(umax, std::abs(u[j]));
  }
  std::vector<PartCandidate> raw;
  if (umax == 0.0 || n < 3) return raw;
  const double thr = cfg.tau * umax;
  auto near_equal = [&](double a, double b) {
    return std::abs(std::abs(a) - std::abs(b)) <= cfg.equal_rel * std::max(std::abs(a), std::abs(b));
  };
  auto in_jump = [&](double x) {
    for (const auto& iv : jumps)
      if (iv.part == part && iv.distance(x) <= 2.0 * est.h) return true;
    return false;
  };
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t prev = (j + n - 1) % n, next = (j + 1) % n;
    const double a = std::abs(u[j]);
    if (a < thr && a <= std::abs(u[prev]) && a <= std::abs(u[next]))
      raw.push_back({wrap_angle(est.theta[j]), est.values[j]});
    if (cfg.sign_changes && u[j] * u[next] < 0.0) {
      double loc;
      if (near_equal(u[j], u[next]))
        loc = est.theta[j] + node_gap(est, j) / 2.0;
      else
        loc = std::abs(u[j]) < std::abs(u[next]) ? est.theta[j] : est.theta[next];
      loc = wrap_angle(loc);
      if (!in_jump(loc)) raw.push_back({loc, std::abs(u[j]) < std::abs(u[next]) ? est.values[j] : est.values[next]});
    }
  }
  if (est.origin) {
    // the bandgrid straddles 0, so test the origin against its two neighbours
    const double u0 = part_of(*est.origin, part);
    const std::size_t right = n / 2, left = right - 1;
    if (std::abs(u0) < thr && std::abs(u0) <= std::abs(u[left]) && std::abs(u0) <= std::abs(u[right]))
      raw.push_back({0.0, *est.origin});
  }
  // drop tangent candidates sitting on a jump (e.g. the forced sine zero at pi)
  std::vector<PartCandidate> kept;
  for (auto c : raw) {
    if (in_jump(c.location)) continue;
    if (std::abs(c.location) <= cfg.zero_radius) c.location = 0.0;
    kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.location < b.location; });

  // cluster neighbours, collapsing each cluster to the midpoint of its extremes
  const double radius = cfg.cluster_steps * est.h + 1e-12;
  std::vector<std::vector<PartCandidate>> groups;
  for (const auto& c : kept) {
    if (!groups.empty() && c.location - groups.back().back().location <= radius)
      groups.back().push_back(c);
    else
      groups.push_back({c});
  }
  if (groups.size() >= 2 &&
      groups.front().front().location + 2.0 * pi - groups.back().back().location <= radius) {
    for (auto& c : groups.front()) c.location += 2.0 * pi;
    groups.back().insert(groups.back().end(), groups.front().begin(), groups.front().end());
    groups.erase(groups.begin());
  }
  std::vector<PartCandidate> out;
  for (const auto& g : groups) {
    double loc = wrap_angle((g.front().location + g.back().location) / 2.0);
    cplx val = g.front().value;
    double best = std::abs(part_of(val, part));
    for (const auto& c : g)
      if (std::abs(part_of(c.value, part)) < best) {
        best = std::abs(part_of(c.value, part));
        val = c.value;
      }
    if (std::abs(loc) <= 2.0 * est.h) loc = 0.0;
    if (est.grid == GridKind::circ && loc != 0.0) {
      std::size_t j = nearest_node(est, loc);
      loc = wrap_angle(est.theta[j]);
      val = est.values[j];
    }
    out.push_back({loc, val});
  }
  return out;
}

}  // namespace detail

inline std::vector<RootCandidate> detect_roots(const SymbolEstimate& est, const RootDetectConfig& cfg = {}) {
  const std::vector<Interval> jumps = detect_discontinuities(est);
  auto re = detail::part_roots(est, 1, jumps, cfg);
  auto im = detail::part_roots(est, 2, jumps, cfg);
  std::vector<RootCandidate> out;
  std::vector<bool> used(im.size(), false);
  for (const auto& r : re) {
    RootCandidate c{r.location, true, false, r.value};
    for (std::size_t i = 0; i < im.size(); ++i) {
      if (used[i]) continue;
      if (std::abs(wrap_angle(im[i].location - r.location)) < 2.0 * est.h + 1e-12) {
        c.from_imag_part = true;
        used[i] = true;
        break;
      }
    }
    out.push_back(c);
  }
  for (std::size_t i = 0; i < im.size(); ++i)
    if (!used[i]) out.push_back(RootCandidate{im[i].location, false, true, im[i].value});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.location < b.location; });
  return out;
}

struct MultiplicityConfig {
  std::size_t base = 16;
  int power_iters = 4;
};

struct MultiplicityReport {
  std::array<double, 3> eigen_estimates{};
  double ratio = 0.0;
  double log2_ratio = 0.0;
  int multiplicity = 0;
  bool used_abs_branch = false;
};

// Rayleigh quotient after `iters` steps of inverse iteration.
inline double inverse_power(const Eigen::MatrixXcd& S, const Eigen::VectorXcd& start, int iters) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(S);
  const Eigen::MatrixXcd& U = lu.matrixLU();
  double umax = 0.0, umin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    umax = std::max(umax, std::abs(U(i, i)));
    umin = std::min(umin, std::abs(U(i, i)));
  }
  if (!(umin > 1e-15 * umax)) throw error(errc::singular, "singular matrix in inverse iteration");
  Eigen::VectorXcd v = start;
  for (int it = 0; it < iters; ++it) {
    v = lu.solve(v);
    const double nv = v.norm();
    if (!std::isfinite(nv) || nv == 0.0) throw error(errc::numeric, "inverse iteration broke down");
    v /= nv;
  }
  const cplx rq = v.dot(S * v);  // v^H S v
  return std::abs(rq) / v.squaredNorm();
}

inline double inverse_power(const Eigen::MatrixXd& S, const Eigen::VectorXcd& start, int iters) {
  return inverse_power(Eigen::MatrixXcd(S.cast<cplx>()), start, iters);
}

// T_k(|F^part|) with entries from composite Simpson over the grid plus its endpoints.
inline Eigen::MatrixXcd abs_symbol_toeplitz(const ToeplitzMatrix& T, const SymbolEstimate& est, int part,
                                            std::size_t k) {
  Vec x, y;
  if (est.grid == GridKind::band) {
    const double end = std::abs(part_of(expansion_at(T, pi), part));
    x.push_back(-pi);
    y.push_back(end);
    for (std::size_t j = 0; j < est.n; ++j) {
      x.push_back(est.theta[j]);
      y.push_back(std::abs(part_of(est.values[j], part)));
    }
    x.push_back(pi);
    y.push_back(end);
  } else {
    for (std::size_t j = 0; j < est.n; ++j) {
      x.push_back(est.theta[j]);
      y.push_back(std::abs(part_of(est.values[j], part)));
    }
    x.push_back(2.0 * pi);
    y.push_back(y.front());
  }
  const std::size_t M = x.size() - 1;  // intervals
  const double h = est.h;
  Vec w(M + 1, 0.0);
  auto simpson = [&](std::size_t from, std::size_t intervals) {
    for (std::size_t i = 0; i <= intervals; ++i) {
      const double c = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      w[from + i] += c * h / 3.0;
    }
  };
  if (M % 2 == 0) {
    simpson(0, M);
  } else {
    // odd count: Simpson on the first M-3 intervals, three-eighths rule on the rest
    if (M >= 5) simpson(0, M - 3);
    const double c38[4] = {1.0, 3.0, 3.0, 1.0};
    for (std::size_t i = 0; i < 4; ++i) w[M - 3 + i] += c38[i] * 3.0 * h / 8.0;
  }
  const long kk = static_cast<long>(k);
  CVec c(static_cast<std::size_t>(2 * kk - 1), cplx{});
  for (long d = -(kk - 1); d <= kk - 1; ++d) {
    cplx s{};
    for (std::size_t i = 0; i <= M; ++i) s += w[i] * y[i] * std::polar(1.0, -static_cast<double>(d) * x[i]);
    c[static_cast<std::size_t>(d + kk - 1)] = s / (2.0 * pi);
  }
  Eigen::MatrixXcd S(kk, kk);
  for (long r = 0; r < kk; ++r)
    for (long q = 0; q < kk; ++q) S(r, q) = c[static_cast<std::size_t>(r - q + kk - 1)];
  return S;
}

inline bool one_signed(const SymbolEstimate& est, int part) {
  bool pos = true, neg = true;
  for (const auto& v : est.values) {
    const double p = part_of(v, part);
    pos = pos && p >= 0.0;
    neg = neg && p <= 0.0;
  }
  return pos || neg;
}

inline MultiplicityReport estimate_multiplicity(const ToeplitzMatrix& T, const SymbolEstimate& est, double location,
                                                int part, const MultiplicityConfig& cfg = {}) {
  if (part != 1 && part != 2) throw error(errc::usage, "part must be 1 or 2");
  MultiplicityReport rep;
  const bool direct = part == 1 && one_signed(est, 1);
  rep.used_abs_branch = !direct;
  for (int i = 0; i < 3; ++i) {
    const std::size_t k = cfg.base << i;
    if (k > T.size()) throw error(errc::dimension, "matrix too small for multiplicity estimation");
    Eigen::VectorXcd start(static_cast<Eigen::Index>(k));
    for (std::size_t m = 0; m < k; ++m)
      start(static_cast<Eigen::Index>(m)) = std::polar(1.0 / std::sqrt(static_cast<double>(k)), static_cast<double>(m) * location);
    if (direct)
      rep.eigen_estimates[static_cast<std::size_t>(i)] = inverse_power(leading_parts(T, k).first, start, cfg.power_iters);
    else
      rep.eigen_estimates[static_cast<std::size_t>(i)] =
          inverse_power(abs_symbol_toeplitz(T, est, part, k), start, cfg.power_iters);
  }
  const auto& l = rep.eigen_estimates;
  const double gap = l[1] - l[2];
  if (!(gap > 0.0)) throw error(errc::unreliable_estimate, "non-positive eigenvalue gap");
  rep.ratio = (l[0] - l[1]) / gap;
  if (!(rep.ratio > 0.0)) throw error(errc::unreliable_estimate, "non-positive eigenvalue ratio");
  rep.log2_ratio = std::log2(rep.ratio);
  rep.multiplicity = static_cast<int>(std::lround(rep.log2_ratio));
  return rep;
}

struct AutoConfig {
  RootDetectConfig roots{};
  MultiplicityConfig multiplicity{};
  int grid = 512;                      // equispaced approximation nodes in (0, pi)
  double root_radius = 0.1;            // nodes this close to a root are dropped
  double jump_radius = 2.0 * pi / 7.0; // jump intervals are widened by this much
  double spike_factor = 20.0;
  RemezConfig remez{};
};

struct FoldedRoot {
  double x = 0.0;  // in [0, pi]
  bool real_part = false;
  bool imag_part = false;
  std::optional<MultiplicityReport> m1;
  std::optional<MultiplicityReport> m2;
};

struct RootAnalysis {
  SymbolEstimate estimate;
  std::vector<RootCandidate> candidates;
  std::vector<Interval> discontinuities;
  std::vector<FoldedRoot> roots;
  RootSpec spec;  // signs still +1
};

namespace detail {

inline int nearest_with_parity(double v, int parity) {
  int m = static_cast<int>(std::lround(v));
  if (((m % 2) + 2) % 2 == parity) return m;
  return (v >= m) ? m + 1 : m - 1;
}

}  // namespace detail

// Roots folded into [0, pi], multiplicities estimated per vanishing part.
inline RootAnalysis analyze_roots(const ToeplitzMatrix& T, GridKind grid, const AutoConfig& cfg = {}) {
  RootAnalysis a;
  a.estimate = fourier_expansion(T, grid);
  a.candidates = detect_roots(a.estimate, cfg.roots);
  a.discontinuities = detect_discontinuities(a.estimate);
  const double tol = 2.0 * a.estimate.h;
  for (const auto& c : a.candidates) {
    const double x = std::abs(c.location);
    auto it = std::find_if(a.roots.begin(), a.roots.end(), [&](const FoldedRoot& r) { return std::abs(r.x - x) < tol; });
    if (it == a.roots.end()) {
      a.roots.push_back(FoldedRoot{x, c.from_real_part, c.from_imag_part, std::nullopt, std::nullopt});
    } else {
      it->real_part = it->real_part || c.from_real_part;
      it->imag_part = it->imag_part || c.from_imag_part;
    }
  }
  std::sort(a.roots.begin(), a.roots.end(), [](const auto& p, const auto& q) { return p.x < q.x; });
  std::erase_if(a.roots, [&](const FoldedRoot& r) { return r.x >= pi - tol; });  // pi is never eliminated
  for (auto& r : a.roots) {
    if (r.real_part) r.m1 = estimate_multiplicity(T, a.estimate, r.x, 1, cfg.multiplicity);
    if (r.imag_part) r.m2 = estimate_multiplicity(T, a.estimate, r.x, 2, cfg.multiplicity);
    if (r.x == 0.0) {
      ZeroRoot z;
      if (r.m1) z.m1 = std::max(0, detail::nearest_with_parity(r.m1->log2_ratio, 0));
      if (r.m2) z.m2 = std::max(1, detail::nearest_with_parity(r.m2->log2_ratio, 1));
      if (z.m1 > 0 || z.m2 > 0) a.spec.zero = z;
    } else {
      NonzeroRoot q{r.x, r.m1 ? std::max(0, r.m1->multiplicity) : 0, r.m2 ? std::max(0, r.m2->multiplicity) : 0};
      if (q.m1 > 0 || q.m2 > 0) a.spec.roots.push_back(q);
    }
  }
  return a;
}

struct AutoBandResult {
  PrecPtr preconditioner;
  RootAnalysis analysis;
  RootSpec roots;  // with chosen signs
  TrigPolynomial g, q, p;
  Vec even_nodes, odd_nodes;
  ApproxResult even_fit, odd_fit;
};

inline AutoBandResult auto_band_preconditioner(const ToeplitzMatrix& T, int d1, int d2, const AutoConfig& cfg = {}) {
  if (d1 < 0 || d2 < 0) throw error(errc::dimension, "negative degree");
  AutoBandResult res;
  res.analysis = analyze_roots(T, GridKind::band, cfg);
  const auto& an = res.analysis;
  RootSpec spec = an.spec;

  auto near_root = [&](double x) {
    if (spec.zero && std::abs(x) < cfg.root_radius) return true;
    for (const auto& r : spec.roots)
      if (std::abs(std::abs(x) - r.x) < cfg.root_radius) return true;
    return false;
  };
  if (!spec.empty()) {
    Vec xs;
    CVec fs;
    for (std::size_t j = 0; j < an.estimate.n; ++j)
      if (!near_root(an.estimate.theta[j])) {
        xs.push_back(an.estimate.theta[j]);
        fs.push_back(an.estimate.values[j]);
      }
    SignChoice s = choose_signs(xs, fs, spec);
    spec.sign1 = s.sign1;
    spec.sign2 = s.sign2;
  }
  res.roots = spec;
  res.g = build_elimination_poly(spec);

  auto in_jump = [&](double x, bool any_part) {
    for (const auto& iv : an.discontinuities) {
      if (!any_part && iv.part != 1) continue;
      for (double y : {x, -x})
        if (iv.distance(y) <= cfg.jump_radius || iv.contains(y)) return true;
    }
    return false;
  };
  Vec xs;
  CVec ratio;
  for (int i = 1; i <= cfg.grid; ++i) {
    const double x = pi * i / (cfg.grid + 1);
    if (near_root(x)) continue;
    xs.push_back(x);
    ratio.push_back(expansion_at(T, x) / elimination_value(spec, x));
  }
  Vec mags;
  for (const auto& r : ratio) mags.push_back(std::abs(r));
  Vec sorted = mags;
  double median = 0.0;
  if (!sorted.empty()) {
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
    median = sorted[sorted.size() / 2];
  }
  Vec ev, eval_, ov, oval;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (mags[i] > cfg.spike_factor * median) continue;
    if (!in_jump(xs[i], false)) {
      ev.push_back(xs[i]);
      eval_.push_back(ratio[i].real());
    }
    if (!in_jump(xs[i], true)) {
      ov.push_back(xs[i]);
      oval.push_back(ratio[i].imag());
    }
  }
  res.even_nodes = ev;
  res.odd_nodes = ov;
  res.even_fit = remez_on_nodes(ev, eval_, d1, Parity::even, cfg.remez);
  res.odd_fit = remez_on_nodes(ov, oval, d2, Parity::odd, cfg.remez);
  res.q = combine(res.even_fit.poly, res.odd_fit.poly);
  res.p = product(res.g, res.q);
  res.preconditioner = band_preconditioner(res.p, T.size());
  return res;
}

struct AutoCircResult {
  PrecPtr preconditioner;
  RootAnalysis analysis;
  bool composite = false;
  RootSpec roots;
  TrigPolynomial g;
  std::vector<std::size_t> poles;
};

inline AutoCircResult auto_circulant_preconditioner(const ToeplitzMatrix& T, const AutoConfig& cfg = {}) {
  AutoCircResult res;
  const std::size_t n = T.size();
  SymbolEstimate est = fourier_expansion(T, GridKind::circ);
  std::vector<RootCandidate> cands = detect_roots(est, cfg.roots);
  bool any_real = false, common = false;
  for (const auto& c : cands) {
    any_real = any_real || c.from_real_part;
    common = common || (c.from_real_part && c.from_imag_part);
  }
  auto symmetric = [n](const CVec& v) {
    CVec s(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = (v[j] + std::conj(v[(n - j) % n])) / 2.0;
    return s;
  };
  if (!any_real || !common) {
    res.analysis.estimate = est;
    res.analysis.candidates = cands;
    res.g = TrigPolynomial::constant(1.0);
    res.preconditioner = circulant_from_values(symmetric(est.values));
    return res;
  }
  res.analysis = analyze_roots(T, GridKind::circ, cfg);
  RootSpec spec = res.analysis.spec;
  if (spec.empty()) {
    res.g = TrigPolynomial::constant(1.0);
    res.preconditioner = circulant_from_values(symmetric(est.values));
    return res;
  }
  Vec xs;
  CVec fs;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = wrap_angle(est.theta[j]);
    bool near = spec.zero && std::abs(x) < cfg.root_radius;
    for (const auto& r : spec.roots) near = near || std::abs(std::abs(x) - r.x) < cfg.root_radius;
    if (!near) {
      xs.push_back(x);
      fs.push_back(est.values[j]);
    }
  }
  SignChoice s = choose_signs(xs, fs, spec);
  spec.sign1 = s.sign1;
  spec.sign2 = s.sign2;
  res.roots = spec;
  res.g = build_elimination_poly(spec);
  res.composite = true;

  CVec v(n);
  double gmax = 0.0;
  CVec gv(n);
  for (std::size_t j = 0; j < n; ++j) {
    gv[j] = elimination_value(spec, est.theta[j]);
    gmax = std::max(gmax, std::abs(gv[j]));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(gv[j]) <= 1e-14 * gmax) {
      res.poles.push_back(j);
      v[j] = 0.0;
    } else {
      v[j] = est.values[j] / gv[j];
    }
  }
  CVec shifted = shift_pole_values(symmetric(v), res.poles);
  res.preconditioner = std::make_shared<CompositePreconditioner>(std::make_shared<BandPreconditioner>(res.g, n),
                                                                 circulant_from_values(shifted));
  return res;
}

}  // namespace toep
