#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "reference_data.hpp"

namespace {

using namespace toep;

void add_run_flags(CLI::App* cmd, RunSpec& s, std::string& prec, std::string& degrees, std::string& method,
                   std::string& rhs, std::string& residual) {
  cmd->add_option("--symbol", s.symbol, "corpus symbol id")->required();
  cmd->add_option("--n", s.n, "dimension")->check(CLI::PositiveNumber);
  std::vector<std::string> names;
  for (const auto& [kind, name] : prec_names()) names.push_back(name);
  cmd->add_option("--precond", prec, "preconditioner")->check(CLI::IsMember(names));
  cmd->add_option("--deg", degrees, "approximation degrees d1,d2");
  cmd->add_option("--method", method, "gmres or cgn")->check(CLI::IsMember({"gmres", "cgn"}));
  cmd->add_option("--tol", s.tol, "relative residual tolerance");
  cmd->add_option("--max-iters", s.max_iters, "iteration cap (never above n)")->check(CLI::PositiveNumber);
  cmd->add_option("--rhs", rhs, "exact (b = T*ones) or ones (b = ones)")->check(CLI::IsMember({"exact", "ones"}));
  cmd->add_option("--residual", residual, "stopping residual")->check(CLI::IsMember({"preconditioned", "true"}));
}

void finish_run_flags(RunSpec& s, const std::string& prec, const std::string& degrees, const std::string& method,
                      const std::string& rhs, const std::string& residual) {
  s.prec = parse_prec(prec);
  std::tie(s.d1, s.d2) = cli::parse_degrees(degrees);
  s.method = method == "cgn" ? Method::cgn : Method::gmres;
  s.rhs = rhs == "ones" ? RhsKind::ones : RhsKind::exact_ones;
  s.residual = residual == "true" ? ResidualMode::true_residual : ResidualMode::preconditioned;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preconditioned Toeplitz solvers: experiments, tables, spectra and symbol estimation"};
  app.require_subcommand(1);

  RunSpec solve_spec;
  std::string prec = "none", degrees = "4,4", method = "gmres", rhs = "exact", residual = "preconditioned";
  cli::SolveArgs solve;
  bool no_timing = false;
  auto* solve_cmd = app.add_subcommand("solve", "run one preconditioned solve and print a CSV row");
  add_run_flags(solve_cmd, solve_spec, prec, degrees, method, rhs, residual);
  solve_cmd->add_option("--csv", solve.csv, "also append the row to this file");
  solve_cmd->add_flag("--no-timing", no_timing, "print '-' instead of the wall time");

  cli::TableArgs table;
  auto* table_cmd = app.add_subcommand("table", "reproduce a named iteration table");
  std::vector<std::string> ids;
  for (const auto& s : table_specs()) ids.push_back(s.id);
  table_cmd->add_option("--table", table.id, "table id")->required()->check(CLI::IsMember(ids));
  table_cmd->add_option("--out", table.out, "output path (default stdout)");
  table_cmd->add_option("--format", table.format, "csv or md")->check(CLI::IsMember({"csv", "md"}));
  table_cmd->add_option("--max-n", table.options.max_n, "skip dimensions above this");
  table_cmd->add_option("--max-iters", table.options.max_iters, "iteration cap");
  table_cmd->add_option("--workers", table.options.workers, "worker threads (default TOEP_WORKERS or all cores)");
  table_cmd->add_flag("--timing", table.timing, "add a wall_s column (output is then not reproducible)");

  RunSpec spec_spec;
  std::string sprec = "none", sdegrees = "4,4", smethod = "gmres", srhs = "exact", sresidual = "preconditioned";
  cli::SpectrumArgs spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "write eigenvalues or singular values of M^-1 T");
  add_run_flags(spectrum_cmd, spec_spec, sprec, sdegrees, smethod, srhs, sresidual);
  spectrum_cmd->add_option("--what", spectrum.what, "eig or sv")->check(CLI::IsMember({"eig", "sv"}));
  spectrum_cmd->add_option("--out", spectrum.out, "output CSV path")->required();

  cli::EstimateArgs estimate;
  std::string grid = "band";
  auto* estimate_cmd = app.add_subcommand("estimate", "roots, jumps and multiplicities from the matrix entries");
  auto* sym_opt = estimate_cmd->add_option("--symbol", estimate.symbol, "corpus symbol id");
  auto* file_opt = estimate_cmd->add_option("--matrix-file", estimate.matrix_file, "Toeplitz matrix text file");
  sym_opt->excludes(file_opt);
  estimate_cmd->add_option("--n", estimate.n, "dimension when --symbol is used")->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--grid", grid, "band or circ")->check(CLI::IsMember({"band", "circ"}));
  estimate_cmd->add_option("--power-iters", estimate.power_iters, "inverse power steps")->check(CLI::Range(1, 50));

  std::string msymbol, mout;
  std::size_t mn = 256;
  auto* matrix_cmd = app.add_subcommand("matrix", "write the matrix file of a corpus symbol");
  matrix_cmd->add_option("--symbol", msymbol, "corpus symbol id")->required();
  matrix_cmd->add_option("--n", mn, "dimension")->check(CLI::PositiveNumber);
  matrix_cmd->add_option("--out", mout, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::ok : cli::usage;
  }

  try {
    if (*solve_cmd) {
      finish_run_flags(solve_spec, prec, degrees, method, rhs, residual);
      solve.spec = solve_spec;
      solve.timing = !no_timing;
      const int code = cli::cmd_solve(solve, std::cout);
      return code;
    }
    if (*table_cmd) return cli::cmd_table(table, parse_reference(cli::reference_csv), std::cout);
    if (*spectrum_cmd) {
      finish_run_flags(spec_spec, sprec, sdegrees, smethod, srhs, sresidual);
      spectrum.spec = spec_spec;
      return cli::cmd_spectrum(spectrum, std::cout);
    }
    if (*estimate_cmd) {
      estimate.grid = grid == "circ" ? GridKind::circ : GridKind::band;
      return cli::cmd_estimate(estimate, std::cout);
    }
    if (*matrix_cmd) return cli::cmd_matrix(msymbol, mn, mout, std::cout);
  } catch (const toep::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::failure;
  }
  return cli::usage;
}
