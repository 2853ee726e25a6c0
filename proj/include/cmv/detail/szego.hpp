#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cmv::detail {

/// Szegő recursion evaluated on the support of a discrete measure.
///
/// Tracks Phi_k(z_j) and Phi_k^*(z_j) at every support point and reads off
///   conj(alpha_k) = <z Phi_k, 1> / ||Phi_k||^2,
/// which follows from Phi_{k+1} being orthogonal to the constants and
/// <Phi_k^*, 1> = ||Phi_k||^2. Works for any complex/real pair (double or
/// multiprecision). Returns nullopt if some ||Phi_k||^2 drops below min_norm2.
template <class Complex, class Real>
std::optional<std::vector<Complex>> szego_coefficients(std::span<const Complex> z,
                                                       std::span<const Real> weight,
                                                       std::size_t count, const Real& min_norm2) {
  using std::conj;
  using std::norm;
  const std::size_t n = z.size();
  std::vector<Complex> phi(n, Complex(1)), phi_star(n, Complex(1));
  std::vector<Complex> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Complex num(0);
    Real den(0);
    for (std::size_t j = 0; j < n; ++j) {
      num += weight[j] * z[j] * phi[j];
      den += weight[j] * Real(norm(phi[j]));
    }
    if (!(den >= min_norm2)) return std::nullopt;
    const Complex alpha_bar = num / den;
    const Complex alpha = conj(alpha_bar);
    out.push_back(alpha);
    if (k + 1 == count) break;
    for (std::size_t j = 0; j < n; ++j) {
      const Complex zp = z[j] * phi[j];
      phi[j] = zp - alpha_bar * phi_star[j];
      phi_star[j] = phi_star[j] - alpha * zp;
    }
  }
  return out;
}

}  // namespace cmv::detail
