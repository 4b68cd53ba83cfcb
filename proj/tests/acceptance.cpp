// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is nonzero only when a criterion fails that is not listed in
// known_red. A listed criterion still prints FAIL; it is kept visible on purpose.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "reference_data.hpp"
#include "toep/io.hpp"
#include "toep/tables.hpp"

using namespace toep;

namespace {

// Criteria that fail for a documented reason (see README, "Known deviations").
const std::set<int> known_red{3};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
};

// Every converged run is screened for the solution-error bound.
struct ErrorLog {
  std::size_t runs = 0;
  double worst = 0.0;
  std::string worst_run;
};
ErrorLog error_log;

std::size_t solve(const std::string& symbol, std::size_t n, PrecKind prec, Method m = Method::gmres, int d1 = 4,
                  int d2 = 4, double tol = 1e-6, RhsKind rhs = RhsKind::exact_ones) {
  RunSpec s;
  s.symbol = symbol;
  s.n = n;
  s.prec = prec;
  s.method = m;
  s.d1 = d1;
  s.d2 = d2;
  s.tol = tol;
  s.rhs = rhs;
  const RunResult r = run(s);
  if (r.report.converged && r.report.error_inf) {
    ++error_log.runs;
    if (*r.report.error_inf > error_log.worst) {
      error_log.worst = *r.report.error_inf;
      error_log.worst_run = symbol + "/" + to_string(prec) + "/" + std::to_string(n);
    }
  }
  return r.report.converged ? r.report.iterations : s.max_iters + 1;  // unconverged reads as "> cap"
}

std::string tag(const std::string& name, std::size_t n, std::size_t its) {
  return name + "(" + std::to_string(n) + ")=" + std::to_string(its);
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

Outcome kernel_oracle() {
  Outcome o;
  std::mt19937 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 512);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const std::size_t n = dim(rng);
    Vec d(2 * n - 1), v(n);
    for (double& x : d) x = u(rng);
    for (double& x : v) x = u(rng);
    const ToeplitzMatrix T(d);
    const Eigen::VectorXd ref = dense(T) * Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(n));
    const Vec y = T.multiply(v);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(y[i] - ref(static_cast<Eigen::Index>(i))));
    worst = std::max(worst, err / ref.cwiseAbs().maxCoeff());
  }
  std::ostringstream s;
  s << "max rel err " << worst;
  o.require(worst <= 1e-10, s.str());
  return o;
}

Outcome table_f3() {
  Outcome o;
  for (std::size_t n : {256u, 1024u, 2048u}) {
    if (n == 256) {
      const std::size_t none = solve("f3", n, PrecKind::none);
      o.require(none >= 256, tag("none", n, none));
    }
    const std::size_t b = solve("f3", n, PrecKind::band);
    const std::size_t r = solve("f3", n, PrecKind::remez, Method::gmres, 4, 4);
    const std::size_t i = solve("f3", n, PrecKind::interp, Method::gmres, 4, 4);
    o.require(within(b, 10, 13), tag("B", n, b));
    o.require(within(r, 5, 8), tag("R44", n, r));
    o.require(within(i, 4, 8), tag("In44", n, i));
  }
  return o;
}

Outcome table_f1() {
  Outcome o;
  for (std::size_t n : {256u, 2048u}) {
    const std::size_t r66 = solve("f1", n, PrecKind::remez, Method::gmres, 6, 6);
    const std::size_t r86 = solve("f1", n, PrecKind::remez, Method::gmres, 8, 6);
    o.require(within(r66, 6, 9), tag("R66", n, r66));
    o.require(within(r86, 5, 8), tag("R86", n, r86));
  }
  const std::size_t c = solve("f1", 1024, PrecKind::remez, Method::cgn, 6, 6);
  o.require(within(c, 26, 36), tag("PCGN R66", 1024, c));
  return o;
}

Outcome table_f2() {
  Outcome o;
  const std::size_t none = solve("f2", 1024, PrecKind::none);
  o.require(none > 500, "none(1024) " + (none > 500 ? std::string(">500") : std::to_string(none)));
  for (std::size_t n : {256u, 512u, 1024u, 2048u}) {
    const std::size_t b = solve("f2", n, PrecKind::band);
    const std::size_t r = solve("f2", n, PrecKind::remez, Method::gmres, 6, 6);
    o.require(within(b, 60, 80), tag("B", n, b));
    o.require(within(r, 22, 30), tag("R66", n, r));
  }
  const CorpusEntry e = corpus_entry("f2");
  const std::size_t n = 1024;
  const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(e.symbol, n);
  RunSpec s;
  s.symbol = "f2";
  s.n = n;
  s.prec = PrecKind::remez;
  s.d1 = s.d2 = 6;
  const PrecPtr M = make_preconditioner(e, T, s);
  const auto range = table_spec("2.2").interval;
  const ClusterStats st = cluster_stats(singular_values(materialize_preconditioned(T, *M)),
                                        IntervalRegion{range.first, range.second});
  const double cap = std::ceil(2.0 / 7.0 * static_cast<double>(n));
  o.require(within(static_cast<double>(st.outside), 226 * 0.9, 226 * 1.1) && st.outside <= cap,
            "SV-out(1024)=" + std::to_string(st.outside));
  return o;
}

Outcome table_f1_circulant(const ReferenceValues& ref) {
  Outcome o;
  for (std::size_t n : {256u, 512u, 1024u, 2048u}) {
    const std::size_t g = solve("f1", n, PrecKind::circ);
    const std::size_t c = solve("f1", n, PrecKind::circ, Method::cgn);
    o.require(within(g, 4, 6), tag("C gmres", n, g));
    o.require(within(c, 4, 8), tag("C cgn", n, c));
    for (Method m : {Method::gmres, Method::cgn}) {
      const std::size_t its = solve("f1", n, PrecKind::optimal, m);
      const std::string col = std::string(m == Method::gmres ? "gmres" : "cgn") + ":optimal";
      const double paper = std::stod(ref.at({"3.1", n, col}));
      o.require(std::abs(static_cast<double>(its) - paper) <= 1.0, tag("T " + col, n, its));
    }
  }
  return o;
}

Outcome table_f2_circulant() {
  Outcome o;
  std::size_t bc256 = 0, bc2048 = 0, t256 = 0, t2048 = 0;
  for (std::size_t n : {256u, 512u, 1024u, 2048u}) {
    const std::size_t bc = solve("f2", n, PrecKind::band_circ);
    o.require(within(bc, 6, 9), tag("BC", n, bc));
    if (n == 256) bc256 = bc;
    if (n == 2048) bc2048 = bc;
  }
  t256 = solve("f2", 256, PrecKind::optimal);
  t2048 = solve("f2", 2048, PrecKind::optimal);
  o.require(bc2048 <= bc256 + 2, "BC growth " + std::to_string(bc2048) + "-" + std::to_string(bc256));
  o.require(static_cast<double>(t2048) >= 1.5 * static_cast<double>(t256),
            tag("T", 256, t256) + ", " + tag("T", 2048, t2048));
  return o;
}

Outcome gcar() {
  Outcome o;
  for (std::size_t n : {128u, 512u}) {
    const std::size_t c = solve("gcar", n, PrecKind::circ, Method::gmres, 4, 4, 1e-7, RhsKind::ones);
    const std::size_t t = solve("gcar", n, PrecKind::optimal, Method::gmres, 4, 4, 1e-7, RhsKind::ones);
    o.require(within(c, 3, 5), tag("C", n, c));
    o.require(within(t, 5, 7), tag("T", n, t));
  }
  return o;
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return s.str();
}

Outcome multiplicity_f2() {
  Outcome o;
  const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(corpus_entry("f2").symbol, 2048);
  const std::array<double, 3> lam{0.0351, 0.0092, 0.0024};
  bool rounded_ok = true;
  std::string rounded;
  for (GridKind g : {GridKind::band, GridKind::circ}) {
    for (int it = 2; it <= 6; ++it) {
      AutoConfig cfg;
      cfg.multiplicity.power_iters = it;
      const RootAnalysis a = analyze_roots(T, g, cfg);
      const bool ok = a.spec.zero && a.spec.zero->m1 == 2 && a.spec.zero->m2 == 3 && a.spec.roots.empty();
      if (!ok) {
        rounded_ok = false;
        rounded += std::string(" ") + to_string(g) + "/" + std::to_string(it);
      }
      if (it != 4 || a.roots.empty() || !a.roots[0].m1 || !a.roots[0].m2) continue;
      const auto& m1 = *a.roots[0].m1;
      const auto& m2 = *a.roots[0].m2;
      bool lam_ok = true;
      for (std::size_t i = 0; i < 3; ++i) lam_ok = lam_ok && std::abs(m1.eigen_estimates[i] - lam[i]) <= 0.15 * lam[i];
      const std::string name = to_string(g);
      o.require(lam_ok, name + " lambda " + fmt(m1.eigen_estimates[0]) + "/" + fmt(m1.eigen_estimates[1]) + "/" +
                            fmt(m1.eigen_estimates[2]));
      o.require(std::abs(m1.log2_ratio - 1.9224) <= 0.2, name + " log2 re " + fmt(m1.log2_ratio));
      const double target = g == GridKind::circ ? 2.9337 : 2.6634;
      o.require(std::abs(m2.log2_ratio - target) <= 0.2, name + " log2 im " + fmt(m2.log2_ratio));
    }
  }
  o.require(rounded_ok, "m=(2,3) for both grids, power_iters 2..6" + rounded);
  return o;
}

Outcome roots_f9() {
  Outcome o;
  const CorpusEntry e = corpus_entry("f9");
  for (std::size_t n : {1024u, 2048u, 4096u}) {
    // only the 2n-1 diagonals are handed to the estimator
    const ToeplitzMatrix T(fourier_coefficients(e.symbol, n));
    const RootAnalysis a = analyze_roots(T, GridKind::circ);
    double x1 = -1.0;
    for (const auto& r : a.roots)
      if (r.x > 0.0) x1 = r.x;
    o.require(std::abs(x1 - 1.0) <= 5.0 * a.estimate.h, "x1(" + std::to_string(n) + ")=" + fmt(x1, 7));
    int m11 = -1, m02 = -1, m12 = -1;
    if (a.spec.zero) m02 = a.spec.zero->m2;
    if (a.spec.roots.size() == 1) {
      m11 = a.spec.roots[0].m1;
      m12 = a.spec.roots[0].m2;
    }
    o.require(m11 == 2 && m02 == 1 && m12 == 1, "m(" + std::to_string(n) + ")=(" + std::to_string(m11) + "," +
                                                    std::to_string(m02) + "," + std::to_string(m12) + ")");
  }
  return o;
}

Outcome auto_pipelines() {
  Outcome o;
  for (std::size_t n : {1024u, 2048u}) {
    const std::size_t ab = solve("f2", n, PrecKind::auto_band, Method::gmres, 4, 4);
    const std::size_t ac = solve("f2", n, PrecKind::auto_circ, Method::gmres, 4, 4, table_spec("4.11").tol);
    const std::size_t f3 = solve("f3", n, PrecKind::auto_band, Method::gmres, 4, 4);
    const std::size_t f13 = solve("f13", n, PrecKind::auto_circ, Method::gmres, 4, 4, table_spec("4.9").tol);
    const std::size_t f14 = solve("f14", n, PrecKind::auto_circ, Method::gmres, 4, 4, table_spec("4.19").tol);
    o.require(within(ab, 26, 31), tag("f2 auto-band", n, ab));
    o.require(within(ac, 10, 14), tag("f2 auto-circ", n, ac));
    o.require(within(f3, 5, 7), tag("f3 auto-band", n, f3));
    o.require(within(f13, 4, 7), tag("f13 auto-circ", n, f13));
    o.require(within(f14, 7, 10), tag("f14 auto-circ", n, f14));
  }
  return o;
}

// Rectangle bounding f/p, sampled finely, widened by the margin.
RectangleRegion quotient_rectangle(const CorpusEntry& e, const TrigPolynomial& p, double margin) {
  double a = 1e300, b = -1e300, c = 0.0;
  const int M = 200000;
  for (int j = 0; j < M; ++j) {
    const double x = -pi + 2.0 * pi * (j + 0.5) / M;
    const cplx q = e.symbol(x) / p(x);
    a = std::min(a, q.real());
    b = std::max(b, q.real());
    c = std::max(c, std::abs(q.imag()));
  }
  return {a - margin, b + margin, c + margin};
}

Outcome clustering() {
  Outcome o;
  const std::size_t n = 512;
  for (auto [id, d1, d2] : {std::tuple{"f1", 8, 6}, std::tuple{"f4", 4, 4}}) {
    const CorpusEntry e = corpus_entry(id);
    const TrigPolynomial p = known_band_poly(e, {d1, d2, false});
    const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(e.symbol, n);
    const BandPreconditioner M(p, n);
    const RectangleRegion rect = quotient_rectangle(e, p, 0.01);
    const ClusterStats st = cluster_stats(eigenvalues(materialize_preconditioned(T, M)), rect);
    const std::size_t bound = static_cast<std::size_t>(2 * p.degree() - 2);
    o.require(st.outside <= bound, std::string(id) + " eig outside " + std::to_string(st.outside) + " (bound " +
                                       std::to_string(bound) + ")");
  }
  {
    const CorpusEntry e = corpus_entry("f1");
    const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(e.symbol, n);
    const auto C = circulant_from_symbol(e.symbol, n);
    const ClusterStats st = cluster_stats(singular_values(materialize_preconditioned(T, *C)), IntervalRegion{0.95, 1.05});
    o.require(st.outside <= 20, "f1 C_n sv outside " + std::to_string(st.outside));
  }
  std::ostringstream s;
  s << "max |x-1| " << error_log.worst << " over " << error_log.runs << " converged runs";
  o.require(error_log.worst <= 1e-3, s.str() + (error_log.worst > 1e-3 ? " worst " + error_log.worst_run : ""));
  return o;
}

Outcome remez_properties() {
  Outcome o;
  int fits = 0, bad = 0, exact_fits = 0;
  std::string bad_list;
  for (const auto& e : corpus()) {
    const RootSpec r = signed_roots(e);
    auto re = [&](double x) { return (e.symbol(x) / elimination_value(r, x)).real(); };
    auto im = [&](double x) { return (e.symbol(x) / elimination_value(r, x)).imag(); };
    const double c = e.odd_jump_at_pi ? 5.0 * pi / 7.0 : pi;
    for (auto [d1, d2] : {std::pair{4, 4}, std::pair{6, 6}, std::pair{8, 6}, std::pair{10, 10}}) {
      const ApproxResult a = remez(re, d1, Parity::even, pi);
      const ApproxResult b = remez(im, d2, Parity::odd, c);
      fits += 2;
      // a target inside the space is fitted exactly; there is nothing to equioscillate
      auto exact = [](const ApproxResult& f) { return f.max_error <= 1e-12; };
      const bool ok_a = exact(a) || equioscillation_count(a, 1e-6) >= d1 + 2;
      const bool ok_b = exact(b) || equioscillation_count(b, 1e-6) >= d2 + 1;
      exact_fits += (exact(a) ? 1 : 0) + (exact(b) ? 1 : 0);
      if (!ok_a || !ok_b) {
        ++bad;
        bad_list += " " + e.id + "/" + std::to_string(d1) + std::to_string(d2);
      }
    }
  }
  o.require(bad == 0, std::to_string(fits - bad) + "/" + std::to_string(fits) + " fits equioscillate or are exact (" + std::to_string(exact_fits) + " exact)" + bad_list);

  const CorpusEntry f2 = corpus_entry("f2");
  const RootSpec r = signed_roots(f2);
  auto re = [&](double x) { return (f2.symbol(x) / elimination_value(r, x)).real(); };
  auto im = [&](double x) { return (f2.symbol(x) / elimination_value(r, x)).imag(); };
  double prev_a = 1e300, prev_b = 1e300;
  bool mono = true;
  for (int d = 1; d <= 10; ++d) {
    const double ea = remez(re, d, Parity::even).max_error, eb = remez(im, d, Parity::odd).max_error;
    mono = mono && ea <= prev_a * (1 + 1e-9) && eb <= prev_b * (1 + 1e-9);
    prev_a = ea;
    prev_b = eb;
  }
  o.require(mono, "f2/g error monotone in degree 1..10");

  const double ex_even =
      remez([](double x) { return 1.0 - 2.0 * std::cos(x) + 0.5 * std::cos(3 * x); }, 3, Parity::even).max_error;
  const double ex_odd = remez([](double x) { return std::sin(x) - 0.25 * std::sin(2 * x); }, 2, Parity::odd).max_error;
  o.require(ex_even <= 1e-12 && ex_odd <= 1e-12, "exact recovery " + fmt(std::max(ex_even, ex_odd), 3));
  return o;
}

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string(TOEP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return "<popen failed>";
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  pclose(p);
  return out;
}

Outcome determinism() {
  Outcome o;
  for (const std::string args : {"solve --symbol f2 --n 512 --precond remez --deg 6,6 --no-timing",
                                 "solve --symbol f9 --n 512 --precond auto-circ --method cgn --no-timing",
                                 "table --table 3.2 --max-n 512", "table --table 3.5 --max-n 512 --workers 1"}) {
    const std::string a = run_cli(args), b = run_cli(args);
    o.require(!a.empty() && a == b, args.substr(0, args.find(" --")) + " " + std::to_string(a.size()) + " bytes");
  }
  return o;
}

}  // namespace

int main() {
  const ReferenceValues ref = parse_reference(cli::reference_csv);
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "kernel oracle", kernel_oracle},
      {2, "f3 band preconditioners (PGMRES)", table_f3},
      {3, "f1 Remez band preconditioners", table_f1},
      {4, "f2 band preconditioners and SV-out", table_f2},
      {5, "f1 circulants", [&] { return table_f1_circulant(ref); }},
      {6, "f2 band-times-circulant flatness", table_f2_circulant},
      {7, "Gcar circulants", gcar},
      {8, "f2 multiplicity estimation", multiplicity_f2},
      {9, "f9 root estimation", roots_f9},
      {10, "automatic pipelines", auto_pipelines},
      {11, "clustering properties", clustering},
      {12, "Remez properties", remez_properties},
      {13, "CLI determinism", determinism},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& ex) {
      o.require(false, std::string("error: ") + ex.what());
    }
    const bool red_known = known_red.count(c.id) > 0;
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << (o.pass || !red_known ? "" : " (known)")
              << "  " << c.name << "  | " << o.detail.str() << std::endl;
    if (!o.pass && !red_known) ++unexpected;
    if (o.pass && red_known) std::cout << "  note: criterion " << c.id << " is listed as known red but passed\n";
  }
  return unexpected == 0 ? 0 : 1;
}
