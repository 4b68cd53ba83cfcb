#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace toep {

using cplx = std::complex<double>;
using Vec = std::vector<double>;
using CVec = std::vector<cplx>;

inline constexpr double pi = std::numbers::pi;

enum class errc {
  evaluation,
  parity,
  dimension,
  cap_exceeded,
  singular,
  non_real,
  non_convergence,
  insufficient_nodes,
  breakdown,
  numeric,
  unreliable_estimate,
  elimination_failure,
  io,
  usage,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::evaluation: return "evaluation";
    case errc::parity: return "parity";
    case errc::dimension: return "dimension";
    case errc::cap_exceeded: return "cap-exceeded";
    case errc::singular: return "singular";
    case errc::non_real: return "non-real";
    case errc::non_convergence: return "non-convergence";
    case errc::insufficient_nodes: return "insufficient-nodes";
    case errc::breakdown: return "breakdown";
    case errc::numeric: return "numeric";
    case errc::unreliable_estimate: return "unreliable-estimate";
    case errc::elimination_failure: return "elimination-failure";
    case errc::io: return "io";
    case errc::usage: return "usage";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace toep
