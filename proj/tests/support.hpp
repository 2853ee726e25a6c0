#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cmv/core.hpp"

namespace testing {

using cmv::cplx;

/// Hand-rolled generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  cplx disk(double radius) {
    return std::polar(radius * std::sqrt(uniform(0.0, 1.0)), uniform(-M_PI, M_PI));
  }
  cplx circle() { return std::polar(1.0, uniform(-M_PI, M_PI)); }

  cmv::VerblunskySet verblunsky(std::size_t n, double radius = 0.9) {
    std::vector<cplx> a(n);
    for (std::size_t k = 0; k + 1 < n; ++k) a[k] = disk(radius);
    a[n - 1] = circle();
    return cmv::VerblunskySet(std::move(a));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// CMV entries written out row by row (alpha_{-1} = -1, rho_{-1} = 0,
/// rho_{n-1} = 0; columns outside [0, n) are dropped).
inline cmv::CMatrix cmv_pattern(const cmv::VerblunskySet& v) {
  const long n = long(v.n());
  auto a = [&](long k) -> cplx {
    if (k < 0) return {-1.0, 0.0};
    return k < n ? v.alpha(std::size_t(k)) : cplx{};  // k >= n only feeds dropped columns
  };
  auto r = [&](long k) -> double { return (k < 0 || k >= n - 1) ? 0.0 : v.rho(std::size_t(k)); };
  cmv::CMatrix C = cmv::CMatrix::Zero(n, n);
  auto put = [&](long row, long col, cplx value) {
    if (col >= 0 && col < n) C(row, col) = value;
  };
  for (long row = 0; row < n; ++row) {
    if (row % 2 == 0) {
      const long j = row;
      put(row, j - 1, std::conj(a(j)) * r(j - 1));
      put(row, j, -std::conj(a(j)) * a(j - 1));
      put(row, j + 1, r(j) * std::conj(a(j + 1)));
      put(row, j + 2, r(j) * r(j + 1));
    } else {
      const long j = row - 1;
      put(row, j - 1, r(j) * r(j - 1));
      put(row, j, -r(j) * a(j - 1));
      put(row, j + 1, -a(j) * std::conj(a(j + 1)));
      put(row, j + 2, -a(j) * r(j + 1));
    }
  }
  return C;
}

inline double max_abs(const cmv::CMatrix& A) { return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testing
