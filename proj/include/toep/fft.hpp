#pragma once

// Thin FFTW wrapper. Plans are created once per (length, direction) and
// cached; planning is serialized, execution is reentrant.

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "toep/types.hpp"

namespace toep::fft {

namespace detail {

inline fftw_plan plan_for(int n, int sign) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  CVec scratch(static_cast<std::size_t>(n));
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, plan);
  return plan;
}

inline void run(CVec& a, int sign) {
  if (a.size() <= 1) return;
  fftw_plan plan = plan_for(static_cast<int>(a.size()), sign);
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace detail

// a_k <- sum_j a_j exp(-2 pi i jk/n), unnormalized.
inline void forward(CVec& a) { detail::run(a, FFTW_FORWARD); }

// a_k <- sum_j a_j exp(+2 pi i jk/n), unnormalized.
inline void backward(CVec& a) { detail::run(a, FFTW_BACKWARD); }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace toep::fft
