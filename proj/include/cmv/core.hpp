#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cmv/error.hpp"

namespace cmv {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

/// Interior coefficients must satisfy |alpha| <= 1 - kInteriorMargin.
inline constexpr double kInteriorMargin = 1e-12;
/// Tolerance on |alpha_{n-1}| = 1 before renormalization.
inline constexpr double kBoundaryTolerance = 1e-12;

/// Verblunsky coefficients alpha_0..alpha_{n-1}: interior ones strictly inside
/// the unit disk, the last one on the unit circle. rho_k = sqrt(1 - |alpha_k|^2)
/// is cached for the n-1 interior coefficients.
class VerblunskySet {
 public:
  /// Validates and renormalizes alpha_{n-1} to exact unit modulus.
  explicit VerblunskySet(std::vector<cplx> alpha);

  std::size_t n() const noexcept { return alpha_.size(); }
  std::span<const cplx> alpha() const noexcept { return alpha_; }
  std::span<const double> rho() const noexcept { return rho_; }
  cplx alpha(std::size_t k) const { return alpha_.at(k); }
  /// rho_k for 0 <= k <= n-1; rho_{n-1} is 0 by definition.
  double rho(std::size_t k) const;
  cplx last() const noexcept { return alpha_.back(); }

  bool operator==(const VerblunskySet&) const = default;

 private:
  std::vector<cplx> alpha_;
  std::vector<double> rho_;
};

/// The 2x2 block [[conj(a), rho], [rho, -a]].
Eigen::Matrix2cd build_xi(cplx alpha);

struct LMFactors {
  CMatrix L;
  CMatrix M;
};

/// L = diag(Xi_0, Xi_2, ...), M = diag(Xi_{-1}, Xi_1, Xi_3, ...), with
/// Xi_{-1} = [1] and the trailing Xi_{n-1} = [conj(alpha_{n-1})].
LMFactors build_LM(const VerblunskySet& v);

class CMVMatrix {
 public:
  explicit CMVMatrix(VerblunskySet source);

  std::size_t n() const noexcept { return source_.n(); }
  const CMatrix& entries() const noexcept { return entries_; }
  const VerblunskySet& source() const noexcept { return source_; }
  cplx operator()(std::size_t r, std::size_t c) const {
    return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

 private:
  VerblunskySet source_;
  CMatrix entries_;
};

/// C = L M, assembled from the block structure (5-diagonal, exact zeros
/// outside the band).
CMVMatrix build_cmv(const VerblunskySet& v);

/// conj(alpha_0) - sum_{k>=1} alpha_{k-1} conj(alpha_k)
cplx cmv_trace_identity(const VerblunskySet& v);
/// (-1)^{n-1} conj(alpha_{n-1})
cplx cmv_determinant_identity(const VerblunskySet& v);

/// Real symmetric tridiagonal matrix with diagonal b and positive
/// off-diagonal a.
class JacobiMatrix {
 public:
  JacobiMatrix(std::vector<double> b, std::vector<double> a);

  std::size_t n() const noexcept { return b_.size(); }
  std::span<const double> b() const noexcept { return b_; }
  std::span<const double> a() const noexcept { return a_; }
  RMatrix dense() const;

  bool operator==(const JacobiMatrix&) const = default;

 private:
  std::vector<double> b_;
  std::vector<double> a_;
};

JacobiMatrix build_jacobi(std::vector<double> b, std::vector<double> a);

/// Principal value of an angle in (-pi, pi].
double wrap_angle(double theta) noexcept;

/// Finitely supported probability measure on the unit circle, stored by
/// angle in (-pi, pi], ascending.
class SpectralMeasureCircle {
 public:
  struct Point {
    double theta;
    double weight;
  };

  /// Points are wrapped into (-pi, pi] and sorted. Weights must be positive
  /// and sum to one within 1e-12; distinct points must be separated by more
  /// than 1e-10 in angle.
  SpectralMeasureCircle(std::vector<double> thetas, std::vector<double> weights);

  /// Same validation except that positive weights are rescaled to sum to one.
  static SpectralMeasureCircle normalized(std::vector<double> thetas,
                                          std::vector<double> weights);

  std::size_t size() const noexcept { return theta_.size(); }
  std::span<const double> thetas() const noexcept { return theta_; }
  std::span<const double> weights() const noexcept { return weight_; }
  cplx point(std::size_t j) const { return std::polar(1.0, theta_.at(j)); }

  bool operator==(const SpectralMeasureCircle&) const = default;

 private:
  SpectralMeasureCircle() = default;
  void check_and_sort(double sum_tolerance);

  std::vector<double> theta_;
  std::vector<double> weight_;
};

/// Finitely supported probability measure on the real line, ascending.
class SpectralMeasureLine {
 public:
  SpectralMeasureLine(std::vector<double> points, std::vector<double> weights);
  static SpectralMeasureLine normalized(std::vector<double> points,
                                        std::vector<double> weights);

  std::size_t size() const noexcept { return x_.size(); }
  std::span<const double> points() const noexcept { return x_; }
  std::span<const double> weights() const noexcept { return weight_; }

  bool operator==(const SpectralMeasureLine&) const = default;

 private:
  SpectralMeasureLine() = default;
  void check_and_sort(double sum_tolerance);

  std::vector<double> x_;
  std::vector<double> weight_;
};

}  // namespace cmv
