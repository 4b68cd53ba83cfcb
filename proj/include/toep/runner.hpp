#pragma once

// Builds the named preconditioners for a corpus symbol and runs one solve.

#include <cmath>

#include "toep/corpus.hpp"
#include "toep/estimate.hpp"
#include "toep/krylov.hpp"

namespace toep {

enum class PrecKind { none, band, remez, interp, strang, optimal, circ, band_circ, band_optimal, auto_band, auto_circ };

inline const std::vector<std::pair<PrecKind, std::string>>& prec_names() {
  static const std::vector<std::pair<PrecKind, std::string>> names{
      {PrecKind::none, "none"},           {PrecKind::band, "band"},
      {PrecKind::remez, "remez"},         {PrecKind::interp, "interp"},
      {PrecKind::strang, "strang"},       {PrecKind::optimal, "optimal"},
      {PrecKind::circ, "circ"},           {PrecKind::band_circ, "band-circ"},
      {PrecKind::band_optimal, "band-optimal"}, {PrecKind::auto_band, "auto-band"},
      {PrecKind::auto_circ, "auto-circ"}};
  return names;
}

inline std::string to_string(PrecKind k) {
  for (const auto& [kind, name] : prec_names())
    if (kind == k) return name;
  return "?";
}

inline PrecKind parse_prec(const std::string& s) {
  for (const auto& [kind, name] : prec_names())
    if (name == s) return kind;
  throw error(errc::usage, "unknown preconditioner '" + s + "'");
}

// Known-symbol root elimination with signs chosen on a fixed grid.
inline RootSpec signed_roots(const CorpusEntry& e) {
  if (e.roots.empty()) return e.roots;
  Vec x = sign_grid(e.roots, 1e-3);
  CVec fv(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) fv[j] = e.symbol(x[j]);
  SignChoice s = choose_signs(x, fv, e.roots);
  RootSpec r = e.roots;
  r.sign1 = s.sign1;
  r.sign2 = s.sign2;
  return r;
}

// f/g as a symbol; exact roots of g are stepped over by a tiny offset.
inline GeneratingSymbol quotient_symbol(const CorpusEntry& e, const RootSpec& r) {
  GeneratingSymbol f = e.symbol;
  auto value = [f, r](double x) {
    cplx g = elimination_value(r, x);
    if (std::abs(g) < 1e-200) {
      const double y = x + 1e-7;
      return f(y) / elimination_value(r, y);
    }
    return f(x) / g;
  };
  return GeneratingSymbol{f.name + "/g", [value](double x) { return value(x).real(); },
                          [value](double x) { return value(x).imag(); }, f.breakpoints};
}

struct BandApproxOptions {
  int d1 = 4;
  int d2 = 4;
  bool interpolation = false;
  double cutoff = 5.0 * pi / 7.0;
  RemezConfig remez{};
};

// q approximating f/g (Remez or interpolation), p = g q.
inline TrigPolynomial known_band_poly(const CorpusEntry& e, const BandApproxOptions& o) {
  const RootSpec r = signed_roots(e);
  const TrigPolynomial g = build_elimination_poly(r);
  auto re = [&](double x) { return (e.symbol(x) / elimination_value(r, x)).real(); };
  auto im = [&](double x) { return (e.symbol(x) / elimination_value(r, x)).imag(); };
  const double c = e.odd_jump_at_pi ? o.cutoff : pi;
  TrigPolynomial q1, q2;
  if (o.interpolation) {
    q1 = interpolate(re, o.d1, Parity::even, pi);
    q2 = interpolate(im, o.d2, Parity::odd, c);
  } else {
    RemezConfig cfg = o.remez;
    q1 = remez(re, o.d1, Parity::even, pi, cfg).poly;
    q2 = remez(im, o.d2, Parity::odd, c, cfg).poly;
  }
  return product(g, combine(q1, q2));
}

inline CVec symbol_on_circgrid(const GeneratingSymbol& f, std::size_t n) {
  CVec v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = f.eval(2.0 * pi * static_cast<double>(j) / static_cast<double>(n));
  // at a jump of the odd part (theta = pi) the mirrored average keeps the circulant real
  CVec s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = (v[j] + std::conj(v[(n - j) % n])) / 2.0;
  return s;
}

inline std::shared_ptr<const CirculantPreconditioner> circulant_from_symbol(const GeneratingSymbol& f,
                                                                            std::size_t n) {
  return circulant_from_values(symbol_on_circgrid(f, n));
}

// T_n(g) C_n(f/g) for a known symbol.
inline PrecPtr known_band_circulant(const CorpusEntry& e, std::size_t n) {
  const RootSpec r = signed_roots(e);
  const TrigPolynomial g = build_elimination_poly(r);
  CVec v(n);
  std::vector<std::size_t> poles;
  for (std::size_t j = 0; j < n; ++j) {
    const double th = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
    const cplx gv = elimination_value(r, th);
    if (std::abs(gv) < 1e-12) {
      poles.push_back(j);
      v[j] = 0.0;
    } else {
      v[j] = e.symbol.eval(th) / gv;
    }
  }
  CVec s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = (v[j] + std::conj(v[(n - j) % n])) / 2.0;
  s = shift_pole_values(s, poles);
  return std::make_shared<CompositePreconditioner>(std::make_shared<BandPreconditioner>(g, n),
                                                   circulant_from_values(s));
}

// T_n(g) times the optimal circulant of T_n(f/g).
inline PrecPtr known_band_optimal(const CorpusEntry& e, std::size_t n) {
  const RootSpec r = signed_roots(e);
  const TrigPolynomial g = build_elimination_poly(r);
  const ToeplitzMatrix Tq = ToeplitzMatrix::from_symbol(quotient_symbol(e, r), n);
  return std::make_shared<CompositePreconditioner>(std::make_shared<BandPreconditioner>(g, n),
                                                   circulant_optimal(Tq));
}

struct RunSpec {
  std::string symbol;
  std::size_t n = 256;
  PrecKind prec = PrecKind::none;
  int d1 = 4;
  int d2 = 4;
  Method method = Method::gmres;
  double tol = 1e-6;
  std::size_t max_iters = 500;
  RhsKind rhs = RhsKind::exact_ones;
  ResidualMode residual = ResidualMode::preconditioned;
};

inline PrecPtr make_preconditioner(const CorpusEntry& e, const ToeplitzMatrix& T, const RunSpec& s) {
  const std::size_t n = T.size();
  switch (s.prec) {
    case PrecKind::none: return std::make_shared<IdentityPreconditioner>(n);
    case PrecKind::band: return band_preconditioner(build_elimination_poly(signed_roots(e)), n);
    case PrecKind::remez: return band_preconditioner(known_band_poly(e, {s.d1, s.d2, false}), n);
    case PrecKind::interp: return band_preconditioner(known_band_poly(e, {s.d1, s.d2, true}), n);
    case PrecKind::strang: return circulant_strang(T);
    case PrecKind::optimal: return circulant_optimal(T);
    case PrecKind::circ: return circulant_from_symbol(e.symbol, n);
    case PrecKind::band_circ: return known_band_circulant(e, n);
    case PrecKind::band_optimal: return known_band_optimal(e, n);
    case PrecKind::auto_band: return auto_band_preconditioner(T, s.d1, s.d2).preconditioner;
    case PrecKind::auto_circ: return auto_circulant_preconditioner(T).preconditioner;
  }
  throw error(errc::usage, "unhandled preconditioner kind");
}

struct RunResult {
  RunSpec spec;
  SolveReport report;
};

inline RunResult run(const RunSpec& s) {
  const CorpusEntry e = corpus_entry(s.symbol);
  const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(e.symbol, s.n);
  PrecPtr M = make_preconditioner(e, T, s);
  SolveConfig cfg;
  cfg.tol = s.tol;
  cfg.max_iters = std::min(s.max_iters, s.n);
  cfg.method = s.method;
  cfg.rhs = s.rhs;
  cfg.residual = s.residual;
  return RunResult{s, experiment(T, *M, cfg)};
}

}  // namespace toep
