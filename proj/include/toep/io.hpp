#pragma once

// Plain-text Toeplitz matrix files: first line n, then t_{-(n-1)} ... t_{n-1}, one per line.

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "toep/core.hpp"

namespace toep {

inline void write_matrix(std::ostream& out, const ToeplitzMatrix& T) {
  const long n = static_cast<long>(T.size());
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << n << '\n';
  for (long k = -(n - 1); k <= n - 1; ++k) out << T.t(k) << '\n';
}

inline ToeplitzMatrix read_matrix(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n <= 0) throw error(errc::io, "matrix file: missing or invalid dimension");
  const std::size_t count = static_cast<std::size_t>(2 * n - 1);
  Vec diag;
  diag.reserve(count);
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw error(errc::io, "matrix file: bad value '" + tok + "'");
    }
    if (used != tok.size()) throw error(errc::io, "matrix file: bad value '" + tok + "'");
    diag.push_back(v);
  }
  if (diag.size() != count)
    throw error(errc::io, "matrix file: expected " + std::to_string(count) + " values, found " +
                              std::to_string(diag.size()));
  return ToeplitzMatrix(std::move(diag));
}

inline void save_matrix(const std::string& path, const ToeplitzMatrix& T) {
  std::ofstream out(path);
  if (!out) throw error(errc::io, "cannot open '" + path + "' for writing");
  write_matrix(out, T);
  out.flush();
  if (!out) throw error(errc::io, "write failed for '" + path + "'");
}

inline ToeplitzMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io, "cannot open '" + path + "'");
  return read_matrix(in);
}

}  // namespace toep
