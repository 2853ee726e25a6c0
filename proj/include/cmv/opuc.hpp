#pragma once

#include <cstddef>
#include <vector>

#include "cmv/core.hpp"

namespace cmv {

/// Polynomial with coefficients c_0..c_k; the degree is the nominal one,
/// coeffs.size() - 1, even if the leading coefficient vanishes.
struct Polynomial {
  std::vector<cplx> coeffs;

  std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  cplx operator()(cplx z) const;
  bool operator==(const Polynomial&) const = default;
};

/// Polynomial with leading coefficient exactly 1.
class MonicPolynomial {
 public:
  explicit MonicPolynomial(std::vector<cplx> coeffs);

  std::size_t degree() const noexcept { return poly_.degree(); }
  std::span<const cplx> coeffs() const noexcept { return poly_.coeffs; }
  cplx operator()(cplx z) const { return poly_(z); }
  const Polynomial& polynomial() const noexcept { return poly_; }

 private:
  Polynomial poly_;
};

/// theta_j = arg(lambda_j), mu_j = |<e_1, v_j>|^2. Uses the complex Schur
/// form, whose Schur vectors are the eigenvectors of a unitary matrix.
SpectralMeasureCircle unitary_eigensystem(const CMVMatrix& C);
SpectralMeasureCircle unitary_eigensystem(const CMatrix& C);

SpectralMeasureLine jacobi_eigensystem(const JacobiMatrix& J);

/// Monic orthogonal polynomials Phi_0..Phi_{k_max} in L^2(mu), by two-pass
/// modified Gram-Schmidt on the monomials.
std::vector<MonicPolynomial> monic_opuc(const SpectralMeasureCircle& mu, std::size_t k_max);

/// Phi^*(z) = z^k conj(Phi(1/conj z)): c_l -> conj(c_{k-l}).
Polynomial reversed_poly(const Polynomial& p);
inline Polynomial reversed_poly(const MonicPolynomial& p) { return reversed_poly(p.polynomial()); }

/// Inverse spectral map: Verblunsky coefficients of an n-point measure.
VerblunskySet verblunsky_from_measure(const SpectralMeasureCircle& mu);

/// Geronimus relations. Input: 2n real coefficients with alpha_{2n-1} = -1
/// (and the convention alpha_{-1} = -1). Output: the n x n Jacobi matrix.
JacobiMatrix geronimus(const VerblunskySet& v);
/// Same map on raw real coefficients alpha_0..alpha_{2n-2} in (-1, 1); the
/// boundary values alpha_{-1} = alpha_{2n-1} = -1 are implied.
JacobiMatrix geronimus_interior(std::span<const double> alpha);

/// Push a conjugation-symmetric circle measure to [-2, 2] through
/// x = z + 1/z = 2 cos(theta).
SpectralMeasureLine szego_project(const SpectralMeasureCircle& mu);

}  // namespace cmv
