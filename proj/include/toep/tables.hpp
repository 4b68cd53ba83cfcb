#pragma once

// Named experiment grids (symbol x dimension x preconditioner) with reference
// values, run on a worker pool and emitted in a fixed row order.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <string_view>
#include <thread>

#include "toep/runner.hpp"
#include "toep/spectra.hpp"

namespace toep {

struct TableColumn {
  Method method = Method::gmres;
  PrecKind prec = PrecKind::none;
  int d1 = 4;
  int d2 = 4;
  bool sv_out = false;  // count singular values outside `interval` instead of iterating

  std::string label() const {
    std::string p = to_string(prec);
    if (prec == PrecKind::remez || prec == PrecKind::interp || prec == PrecKind::auto_band)
      p += std::to_string(d1) + std::to_string(d2);
    if (sv_out) return "sv-out:" + p;
    return std::string(method == Method::gmres ? "gmres:" : "cgn:") + p;
  }
};

struct TableSpec {
  std::string id;
  std::string symbol;
  std::vector<std::size_t> dims;
  double tol = 1e-6;
  RhsKind rhs = RhsKind::exact_ones;
  std::vector<TableColumn> columns;
  std::pair<double, double> interval{0.0, 0.0};  // cluster interval for sv-out columns
};

namespace detail {
inline TableColumn col(Method m, PrecKind p, int d1 = 4, int d2 = 4) { return {m, p, d1, d2, false}; }
inline std::vector<TableColumn> both(std::vector<TableColumn> g) {
  const std::size_t k = g.size();
  for (std::size_t i = 0; i < k; ++i) {
    TableColumn c = g[i];
    c.method = Method::cgn;
    g.push_back(c);
  }
  return g;
}
}  // namespace detail

inline const std::vector<TableSpec>& table_specs() {
  using detail::both;
  using detail::col;
  constexpr auto G = Method::gmres;
  using P = PrecKind;
  const std::vector<std::size_t> ch2{256, 512, 1024, 2048}, ch4{1024, 2048, 4096, 8192}, ch4b{2048, 4096, 8192};
  static const std::vector<TableSpec> specs{
      {"2.1", "f1", ch2, 1e-6, RhsKind::exact_ones,
       both({col(G, P::none), col(G, P::remez, 4, 4), col(G, P::remez, 6, 6), col(G, P::remez, 8, 6)})},
      {"2.2", "f2", ch2, 1e-6, RhsKind::exact_ones,
       [] {
         auto c = both({col(G, P::none), col(G, P::band), col(G, P::remez, 4, 4), col(G, P::remez, 6, 6)});
         c.push_back({G, P::remez, 6, 6, true});
         return c;
       }(),
       {0.931, 1.069}},
      {"2.3", "f3", ch2, 1e-6, RhsKind::exact_ones,
       {col(G, P::none), col(G, P::band), col(G, P::remez, 4, 4), col(G, P::interp, 4, 4), col(G, P::remez, 10, 10),
        col(G, P::interp, 10, 10), TableColumn{G, P::remez, 4, 4, true}},
       {0.904, 1.096}},
      {"2.4", "f4", ch2, 1e-6, RhsKind::exact_ones, {col(G, P::none), col(G, P::band), col(G, P::remez, 4, 4)}},
      {"2.5", "f5", ch2, 1e-6, RhsKind::exact_ones, {col(G, P::none), col(G, P::band), col(G, P::remez, 8, 6)}},
      {"3.1", "f1", ch2, 1e-6, RhsKind::exact_ones, both({col(G, P::none), col(G, P::circ), col(G, P::optimal)})},
      {"3.2", "f2", ch2, 1e-6, RhsKind::exact_ones,
       both({col(G, P::none), col(G, P::optimal), col(G, P::band_circ), col(G, P::band_optimal)})},
      {"3.3", "f3", ch2, 1e-6, RhsKind::exact_ones,
       both({col(G, P::none), col(G, P::optimal), col(G, P::band_circ), col(G, P::band_optimal)})},
      {"3.4", "f7", ch2, 1e-6, RhsKind::exact_ones, both({col(G, P::none), col(G, P::circ), col(G, P::optimal)})},
      {"3.5", "gcar", {128, 256, 512, 1024}, 1e-7, RhsKind::ones,
       {col(G, P::none), col(G, P::circ), col(G, P::optimal)}},
      {"4.2", "f2", ch4, 1e-6, RhsKind::exact_ones, both({col(G, P::none), col(G, P::auto_band, 4, 4)})},
      {"4.5", "f9", ch4b, 1e-6, RhsKind::exact_ones, {col(G, P::none), col(G, P::auto_band, 8, 4)}},
      {"4.6", "f10", ch4b, 1e-6, RhsKind::exact_ones, {col(G, P::none), col(G, P::auto_band, 4, 4)}},
      {"4.7", "f11", ch4, 1e-6, RhsKind::exact_ones, {col(G, P::none), col(G, P::circ), col(G, P::auto_circ)}},
      {"4.8", "f12", ch4, 1e-6, RhsKind::exact_ones, {col(G, P::none), col(G, P::circ), col(G, P::auto_circ)}},
      {"4.9", "f13", ch4, 1e-6, RhsKind::exact_ones,
       {col(G, P::none), col(G, P::circ), col(G, P::auto_circ), col(G, P::auto_band, 4, 4)}},
      {"4.11", "f2", ch4, 1e-6, RhsKind::exact_ones,
       {col(G, P::none), col(G, P::band_circ), col(G, P::auto_circ), col(G, P::auto_band, 4, 4)}},
      {"4.12", "f2", ch4, 1e-6, RhsKind::exact_ones,
       {col(Method::cgn, P::none), col(Method::cgn, P::band_circ), col(Method::cgn, P::auto_circ),
        col(Method::cgn, P::auto_band, 4, 4)}},
      {"4.15", "f9", ch4, 1e-7, RhsKind::exact_ones,
       {col(G, P::none), col(G, P::band_circ), col(G, P::auto_circ), col(G, P::auto_band, 4, 4)}},
      {"4.16", "f9", ch4, 1e-7, RhsKind::exact_ones,
       {col(Method::cgn, P::none), col(Method::cgn, P::band_circ), col(Method::cgn, P::auto_circ),
        col(Method::cgn, P::auto_band, 4, 4)}},
      {"4.19", "f14", ch4, 1e-7, RhsKind::exact_ones,
       {col(G, P::none), col(G, P::band_circ), col(G, P::auto_circ)}},
  };
  return specs;
}

inline const TableSpec& table_spec(const std::string& id) {
  for (const auto& s : table_specs())
    if (s.id == id) return s;
  throw error(errc::usage, "unknown table '" + id + "'");
}

// (table, n, column) -> reference value as printed (a count, ">500" or "-").
using ReferenceValues = std::map<std::tuple<std::string, std::size_t, std::string>, std::string>;

inline ReferenceValues parse_reference(std::string_view text) {
  ReferenceValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string table, n, column, value;
    if (!std::getline(ls, table, ',') || !std::getline(ls, n, ',') || !std::getline(ls, column, ',') ||
        !std::getline(ls, value))
      throw error(errc::io, "malformed reference line: " + line);
    out[{table, static_cast<std::size_t>(std::stoul(n)), column}] = value;
  }
  return out;
}

struct TableRow {
  std::string table;
  std::string symbol;
  std::size_t n = 0;
  std::string column;
  std::size_t order = 0;
  std::string value;  // iteration count, ">max" when not converged, or the sv-out count
  bool converged = false;
  double final_relres = 0.0;
  double error_inf = 0.0;
  double wall_seconds = 0.0;
  std::string paper_value;
  std::string delta;
  std::string status = "ok";
};

struct TableOptions {
  std::size_t max_n = 2048;
  std::size_t max_iters = 500;
  unsigned workers = 0;  // 0: from TOEP_WORKERS, else hardware concurrency
  ResidualMode residual = ResidualMode::preconditioned;
};

inline unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TOEP_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs `jobs` callables on a fixed pool; each job must only touch its own output.
template <class Job>
void run_pool(std::vector<Job>& jobs, unsigned workers) {
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < jobs.size(); i = next++) jobs[i]();
  };
  std::vector<std::thread> pool;
  const unsigned k = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
  for (unsigned i = 1; i < k; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

inline std::vector<TableRow> run_table(const TableSpec& spec, const ReferenceValues& ref, const TableOptions& opt = {}) {
  std::vector<TableRow> rows;
  for (std::size_t n : spec.dims) {
    if (n > opt.max_n) continue;
    for (std::size_t c = 0; c < spec.columns.size(); ++c) {
      if (spec.columns[c].sv_out && n > dense_cap) continue;
      TableRow r;
      r.table = spec.id;
      r.symbol = spec.symbol;
      r.n = n;
      r.column = spec.columns[c].label();
      r.order = c;
      auto it = ref.find({spec.id, n, r.column});
      r.paper_value = it == ref.end() ? "" : it->second;
      rows.push_back(r);
    }
  }
  std::vector<std::function<void()>> jobs;
  for (auto& row : rows) {
    jobs.emplace_back([&spec, &opt, &row]() {
      const TableColumn& col = spec.columns[row.order];
      RunSpec rs;
      rs.symbol = spec.symbol;
      rs.n = row.n;
      rs.prec = col.prec;
      rs.d1 = col.d1;
      rs.d2 = col.d2;
      rs.method = col.method;
      rs.tol = spec.tol;
      rs.rhs = spec.rhs;
      rs.max_iters = opt.max_iters;
      rs.residual = opt.residual;
      try {
        if (col.sv_out) {
          const CorpusEntry e = corpus_entry(rs.symbol);
          const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(e.symbol, rs.n);
          const PrecPtr M = make_preconditioner(e, T, rs);
          const Vec sv = singular_values(materialize_preconditioned(T, *M));
          const auto stats = cluster_stats(sv, IntervalRegion{spec.interval.first, spec.interval.second});
          row.value = std::to_string(stats.outside);
          row.converged = true;
        } else {
          const RunResult res = run(rs);
          const auto& rep = res.report;
          row.converged = rep.converged;
          row.value = rep.converged ? std::to_string(rep.iterations) : ">" + std::to_string(rep.iterations);
          row.final_relres = rep.residual_history.back();
          row.error_inf = rep.error_inf.value_or(0.0);
          row.wall_seconds = rep.wall_seconds;
        }
      } catch (const error& ex) {
        row.status = errc_name(ex.code());
        row.value = "";
      }
      const bool numeric_ref = !row.paper_value.empty() &&
                               std::all_of(row.paper_value.begin(), row.paper_value.end(),
                                           [](unsigned char ch) { return std::isdigit(ch) != 0; });
      if (row.converged && numeric_ref && row.status == "ok")
        row.delta = std::to_string(std::stol(row.value) - std::stol(row.paper_value));
    });
  }
  run_pool(jobs, worker_count(opt.workers));
  std::sort(rows.begin(), rows.end(),
            [](const TableRow& a, const TableRow& b) { return std::tie(a.n, a.order) < std::tie(b.n, b.order); });
  return rows;
}

inline void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows, bool timing) {
  out << std::setprecision(6);
  out << "table,symbol,n,column,value,converged,final_relres,error_inf,paper_value,delta,status";
  if (timing) out << ",wall_s";
  out << '\n';
  for (const auto& r : rows) {
    out << r.table << ',' << r.symbol << ',' << r.n << ',' << r.column << ',' << r.value << ','
        << (r.converged ? "true" : "false") << ',' << r.final_relres << ',' << r.error_inf << ',' << r.paper_value
        << ',' << r.delta << ',' << r.status;
    if (timing) out << ',' << r.wall_seconds;
    out << '\n';
  }
}

// Wide markdown layout: one row per n, one column per experiment, "ours (paper)" cells.
inline void write_table_markdown(std::ostream& out, const TableSpec& spec, const std::vector<TableRow>& rows) {
  out << "| n |";
  for (const auto& c : spec.columns) out << ' ' << c.label() << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < spec.columns.size(); ++i) out << "---|";
  out << '\n';
  for (std::size_t n : spec.dims) {
    bool any = false;
    for (const auto& r : rows) any = any || r.n == n;
    if (!any) continue;
    out << "| " << n << " |";
    for (std::size_t c = 0; c < spec.columns.size(); ++c) {
      auto it = std::find_if(rows.begin(), rows.end(), [&](const TableRow& r) { return r.n == n && r.order == c; });
      if (it == rows.end()) {
        out << " |";
        continue;
      }
      out << ' ' << (it->status == "ok" ? it->value : it->status);
      if (!it->paper_value.empty()) out << " (" << it->paper_value << ')';
      out << " |";
    }
    out << '\n';
  }
}

}  // namespace toep
