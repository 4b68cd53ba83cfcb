#pragma once

// Dense spectral diagnostics for preconditioned operators.

#include <Eigen/Dense>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <string>
#include <variant>

#include "toep/core.hpp"
#include "toep/precond.hpp"

namespace toep {

inline constexpr std::size_t dense_cap = 1024;

// Columns M^{-1} T e_j.
inline Eigen::MatrixXd materialize_preconditioned(const ToeplitzMatrix& T, const Preconditioner& M,
                                                  std::size_t cap = dense_cap) {
  const std::size_t n = T.size();
  if (n > cap) throw error(errc::cap_exceeded, "dimension above the dense cap");
  if (M.size() != n) throw error(errc::dimension, "preconditioner size mismatch");
  Eigen::MatrixXd A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Vec e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vec col = M.apply_inverse(T.multiply(e));
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return A;
}

inline CVec eigenvalues(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw error(errc::dimension, "square matrix required");
  if (A.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  if (es.info() != Eigen::Success) throw error(errc::non_convergence, "eigenvalue decomposition failed");
  CVec out(static_cast<std::size_t>(A.rows()));
  for (Eigen::Index i = 0; i < A.rows(); ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

inline Vec singular_values(const Eigen::MatrixXd& A) {
  if (A.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  if (svd.info() != Eigen::Success) throw error(errc::non_convergence, "singular value decomposition failed");
  Vec s(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

struct IntervalRegion {
  double a = 0.0, b = 0.0;
};
struct RectangleRegion {
  double a = 0.0, b = 0.0, c = 0.0;  // [a,b] x [-c,c]
};
struct DiskRegion {
  cplx center{};
  double radius = 0.0;
};
using Region = std::variant<IntervalRegion, RectangleRegion, DiskRegion>;

inline bool contains(const Region& r, cplx z) {
  if (const auto* i = std::get_if<IntervalRegion>(&r)) return z.imag() == 0.0 && z.real() >= i->a && z.real() <= i->b;
  if (const auto* q = std::get_if<RectangleRegion>(&r))
    return z.real() >= q->a && z.real() <= q->b && std::abs(z.imag()) <= q->c;
  const auto& d = std::get<DiskRegion>(r);
  return std::abs(z - d.center) <= d.radius;
}

struct ClusterStats {
  Region region;
  std::size_t inside = 0;
  std::size_t outside = 0;
  CVec outliers;
};

inline ClusterStats cluster_stats(const CVec& values, const Region& region) {
  ClusterStats s{region, 0, 0, {}};
  for (const auto& z : values) {
    if (contains(region, z)) {
      ++s.inside;
    } else {
      ++s.outside;
      s.outliers.push_back(z);
    }
  }
  return s;
}

inline ClusterStats cluster_stats(const Vec& values, const Region& region) {
  return cluster_stats(CVec(values.begin(), values.end()), region);
}

namespace detail {
inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw error(errc::io, "cannot open '" + path + "' for writing");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  return out;
}
inline void close_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw error(errc::io, "write failed for '" + path + "'");
}
}  // namespace detail

inline void export_spectrum(const CVec& values, const std::string& path) {
  auto out = detail::open_out(path);
  out << "re,im";
  for (const auto& z : values) out << '\n' << z.real() << ',' << z.imag();
  out << '\n';
  detail::close_out(out, path);
}

inline void export_spectrum(const Vec& values, const std::string& path) {
  auto out = detail::open_out(path);
  out << "sigma";
  for (double s : values) out << '\n' << s;
  out << '\n';
  detail::close_out(out, path);
}

}  // namespace toep
