#pragma once

// Subcommand bodies, kept apart from argument parsing so tests can call them.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <ostream>
#include <sstream>

#include "toep/io.hpp"
#include "toep/tables.hpp"

namespace toep::cli {

enum exit_code : int { ok = 0, failure = 1, usage = 2 };

inline int exit_for(const error& e) { return e.code() == errc::usage ? usage : failure; }

struct SolveArgs {
  RunSpec spec;
  bool timing = true;
  std::string csv;
};

inline std::pair<int, int> parse_degrees(const std::string& s) {
  int a = 0, b = 0;
  char comma = 0;
  std::istringstream in(s);
  if (!(in >> a >> comma >> b) || comma != ',' || !in.eof() || a < 0 || b < 0)
    throw error(errc::usage, "degrees must look like d1,d2");
  return {a, b};
}

inline const char* solve_header() { return "symbol,n,precond,method,iterations,converged,final_relres,wall_s"; }

inline std::string solve_row(const RunResult& r, bool timing) {
  std::ostringstream out;
  out << std::setprecision(6) << r.spec.symbol << ',' << r.spec.n << ',' << to_string(r.spec.prec) << ','
      << (r.spec.method == Method::gmres ? "gmres" : "cgn") << ',' << r.report.iterations << ','
      << (r.report.converged ? "true" : "false") << ',' << r.report.residual_history.back() << ',';
  if (timing)
    out << r.report.wall_seconds;
  else
    out << '-';
  return out.str();
}

inline int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const RunResult r = run(a.spec);
  const std::string row = solve_row(r, a.timing);
  out << solve_header() << '\n' << row << '\n';
  if (!a.csv.empty()) {
    const bool fresh = !std::ifstream(a.csv).good();
    std::ofstream f(a.csv, std::ios::app);
    if (!f) throw error(errc::io, "cannot open '" + a.csv + "'");
    if (fresh) f << solve_header() << '\n';
    f << row << '\n';
  }
  return r.report.converged ? ok : failure;
}

struct TableArgs {
  std::string id;
  std::string out;
  std::string format = "csv";
  bool timing = false;
  TableOptions options;
};

inline int cmd_table(const TableArgs& a, const ReferenceValues& ref, std::ostream& out) {
  const TableSpec& spec = table_spec(a.id);
  const auto rows = run_table(spec, ref, a.options);
  std::ostringstream text;
  if (a.format == "md")
    write_table_markdown(text, spec, rows);
  else if (a.format == "csv")
    write_table_csv(text, rows, a.timing);
  else
    throw error(errc::usage, "format must be csv or md");
  if (a.out.empty() || a.out == "-") {
    out << text.str();
  } else {
    std::ofstream f(a.out);
    if (!f) throw error(errc::io, "cannot open '" + a.out + "'");
    f << text.str();
  }
  bool failed = false;
  for (const auto& r : rows) failed = failed || r.status != "ok";
  return failed ? failure : ok;
}

struct SpectrumArgs {
  RunSpec spec;
  std::string what = "eig";
  std::string out;
};

inline int cmd_spectrum(const SpectrumArgs& a, std::ostream& out) {
  if (a.spec.n > dense_cap) throw error(errc::usage, "spectrum needs n <= " + std::to_string(dense_cap));
  const CorpusEntry e = corpus_entry(a.spec.symbol);
  const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(e.symbol, a.spec.n);
  const PrecPtr M = make_preconditioner(e, T, a.spec);
  const Eigen::MatrixXd A = materialize_preconditioned(T, *M);
  if (a.what == "eig") {
    const CVec ev = eigenvalues(A);
    export_spectrum(ev, a.out);
    out << "wrote " << ev.size() << " eigenvalues to " << a.out << '\n';
  } else if (a.what == "sv") {
    const Vec sv = singular_values(A);
    export_spectrum(sv, a.out);
    out << "wrote " << sv.size() << " singular values to " << a.out << '\n';
  } else {
    throw error(errc::usage, "--what must be eig or sv");
  }
  return ok;
}

struct EstimateArgs {
  std::string symbol;
  std::string matrix_file;
  std::size_t n = 2048;
  GridKind grid = GridKind::band;
  int power_iters = 4;
};

inline void print_estimate(const ToeplitzMatrix& T, GridKind grid, int power_iters, std::ostream& out) {
  AutoConfig cfg;
  cfg.multiplicity.power_iters = power_iters;
  const RootAnalysis a = analyze_roots(T, grid, cfg);
  out << std::setprecision(6) << std::fixed;
  out << "grid " << to_string(grid) << " n " << T.size() << " h " << a.estimate.h << '\n';
  for (const auto& iv : a.discontinuities)
    out << "discontinuity part " << iv.part << " [" << iv.lo << ", " << iv.hi << "]\n";
  if (a.candidates.empty()) {
    out << "no roots detected\n";
    return;
  }
  for (const auto& c : a.candidates) {
    out << "candidate x " << c.location << " parts " << (c.from_real_part ? "re" : "")
        << (c.from_real_part && c.from_imag_part ? "," : "") << (c.from_imag_part ? "im" : "") << " value "
        << std::scientific << std::setprecision(4) << c.value_at.real() << ' ' << c.value_at.imag() << std::fixed
        << std::setprecision(6) << '\n';
  }
  for (const auto& r : a.roots) {
    for (int part = 1; part <= 2; ++part) {
      const auto& m = part == 1 ? r.m1 : r.m2;
      if (!m) continue;
      out << "multiplicity x " << r.x << " part " << part << " lambda " << std::setprecision(4)
          << m->eigen_estimates[0] << ' ' << m->eigen_estimates[1] << ' ' << m->eigen_estimates[2] << " log2 "
          << m->log2_ratio << " m " << m->multiplicity << std::setprecision(6) << '\n';
    }
  }
  const RootSpec& s = a.spec;
  if (s.empty()) {
    out << "eliminated: none\n";
    return;
  }
  out << "eliminated:";
  if (s.zero) out << " zero(" << s.zero->m1 << ',' << s.zero->m2 << ')';
  for (const auto& q : s.roots) out << " root(" << q.x << ';' << q.m1 << ',' << q.m2 << ')';
  out << '\n';
}

inline int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  if (a.symbol.empty() == a.matrix_file.empty()) throw error(errc::usage, "give exactly one of --symbol, --matrix-file");
  const ToeplitzMatrix T = a.matrix_file.empty() ? ToeplitzMatrix::from_symbol(corpus_entry(a.symbol).symbol, a.n)
                                                 : load_matrix(a.matrix_file);
  print_estimate(T, a.grid, a.power_iters, out);
  return ok;
}

inline int cmd_matrix(const std::string& symbol, std::size_t n, const std::string& path, std::ostream& out) {
  const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(corpus_entry(symbol).symbol, n);
  if (path.empty() || path == "-")
    write_matrix(out, T);
  else
    save_matrix(path, T);
  return ok;
}

}  // namespace toep::cli
