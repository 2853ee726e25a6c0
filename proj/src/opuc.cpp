#include "cmv/opuc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cmv/detail/szego.hpp"

namespace cmv {

cplx Polynomial::operator()(cplx z) const {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

MonicPolynomial::MonicPolynomial(std::vector<cplx> coeffs) : poly_{std::move(coeffs)} {
  if (poly_.coeffs.empty() || poly_.coeffs.back() != cplx(1.0)) {
    throw Error(ErrorKind::InvalidArgument, "monic polynomial needs leading coefficient 1");
  }
}

Polynomial reversed_poly(const Polynomial& p) {
  Polynomial r;
  r.coeffs.assign(p.coeffs.rbegin(), p.coeffs.rend());
  for (auto& c : r.coeffs) c = std::conj(c);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

double angular_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

void require_simple_circle_spectrum(const std::vector<double>& theta) {
  for (std::size_t i = 0; i < theta.size(); ++i) {
    for (std::size_t j = i + 1; j < theta.size(); ++j) {
      if (angular_distance(theta[i], theta[j]) < 1e-10) {
        std::ostringstream os;
        os << "eigenvalues at angles " << theta[i] << " and " << theta[j] << " coincide";
        throw Error(ErrorKind::DegenerateSpectrum, os.str());
      }
    }
  }
}

}  // namespace

SpectralMeasureCircle unitary_eigensystem(const CMatrix& C) {
  const auto n = C.rows();
  if (n == 0 || C.cols() != n) throw Error(ErrorKind::InvalidArgument, "square matrix required");
  const double unitarity =
      (C.adjoint() * C - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (unitarity > 1e-10) {
    std::ostringstream os;
    os << "matrix is not unitary (residual " << unitarity << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }

  Eigen::ComplexSchur<CMatrix> schur(C, true);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::IllConditioned, "Schur decomposition did not converge");
  }
  const CMatrix& T = schur.matrixT();
  const CMatrix& U = schur.matrixU();

  std::vector<double> theta(static_cast<std::size_t>(n)), weight(theta.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx lambda = T(j, j);
    const double residual = (C * U.col(j) - lambda * U.col(j)).norm();
    if (residual > 1e-11) {
      std::ostringstream os;
      os << "eigenpair residual " << residual << " exceeds 1e-11";
      throw Error(ErrorKind::IllConditioned, os.str());
    }
    theta[static_cast<std::size_t>(j)] = std::arg(lambda);
    weight[static_cast<std::size_t>(j)] = std::norm(U(0, j));
  }
  require_simple_circle_spectrum(theta);
  for (double w : weight) {
    if (!(w > 0.0)) {
      throw Error(ErrorKind::DegenerateSpectrum, "eigenvector orthogonal to e_1 (zero mass)");
    }
  }
  return SpectralMeasureCircle::normalized(std::move(theta), std::move(weight));
}

SpectralMeasureCircle unitary_eigensystem(const CMVMatrix& C) {
  return unitary_eigensystem(C.entries());
}

SpectralMeasureLine jacobi_eigensystem(const JacobiMatrix& J) {
  const auto n = static_cast<Eigen::Index>(J.n());
  Eigen::VectorXd diag(n), sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index k = 0; k < n; ++k) diag(k) = J.b()[static_cast<std::size_t>(k)];
  for (Eigen::Index k = 0; k + 1 < n; ++k) sub(k) = J.a()[static_cast<std::size_t>(k)];

  std::vector<double> x, w;
  if (n == 1) {
    x = {diag(0)};
    w = {1.0};
  } else {
    Eigen::SelfAdjointEigenSolver<RMatrix> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::IllConditioned, "tridiagonal eigensolver did not converge");
    }
    const RMatrix dense = J.dense();
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto v = es.eigenvectors().col(j);
      const double lambda = es.eigenvalues()(j);
      const double residual = (dense * v - lambda * v).norm();
      if (residual > 1e-11 * std::max(1.0, dense.cwiseAbs().maxCoeff())) {
        throw Error(ErrorKind::IllConditioned, "eigenpair residual too large");
      }
      x.push_back(lambda);
      w.push_back(v(0) * v(0));
    }
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
      if (std::abs(x[j + 1] - x[j]) < 1e-10) {
        throw Error(ErrorKind::DegenerateSpectrum, "coinciding eigenvalues");
      }
    }
  }
  return SpectralMeasureLine::normalized(std::move(x), std::move(w));
}

// ---------------------------------------------------------------------------

std::vector<MonicPolynomial> monic_opuc(const SpectralMeasureCircle& mu, std::size_t k_max) {
  const std::size_t n = mu.size();
  if (k_max > n) {
    std::ostringstream os;
    os << "k_max = " << k_max << " exceeds support size " << n;
    throw Error(ErrorKind::SupportTooSmall, os.str());
  }
  std::vector<cplx> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = mu.point(j);
  const auto w = mu.weights();

  auto inner = [&](const std::vector<cplx>& f, const std::vector<cplx>& g) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += w[j] * f[j] * std::conj(g[j]);
    return acc;
  };

  std::vector<std::vector<cplx>> coeffs;  // Phi_k coefficients
  std::vector<std::vector<cplx>> values;  // Phi_k at the support
  std::vector<double> norms2;
  std::vector<MonicPolynomial> out;
  std::vector<cplx> zk(n, 1.0);
  for (std::size_t k = 0; k <= k_max; ++k) {
    std::vector<cplx> c(k + 1, 0.0);
    c[k] = 1.0;
    std::vector<cplx> val = zk;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < k; ++i) {
        if (norms2[i] == 0.0) continue;
        const cplx proj = inner(val, values[i]) / norms2[i];
        for (std::size_t l = 0; l <= i; ++l) c[l] -= proj * coeffs[i][l];
        for (std::size_t j = 0; j < n; ++j) val[j] -= proj * values[i][j];
      }
    }
    c[k] = 1.0;
    norms2.push_back(std::real(inner(val, val)));
    coeffs.push_back(c);
    values.push_back(val);
    out.emplace_back(std::move(c));
    for (std::size_t j = 0; j < n; ++j) zk[j] *= z[j];
  }
  return out;
}

VerblunskySet verblunsky_from_measure(const SpectralMeasureCircle& mu) {
  const std::size_t n = mu.size();
  std::vector<cplx> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = mu.point(j);
  const auto coeffs = detail::szego_coefficients<cplx, double>(z, mu.weights(), n, 1e-13);
  if (!coeffs) {
    throw Error(ErrorKind::IllConditioned, "||Phi_k||^2 fell below 1e-13 during the recursion");
  }
  std::vector<cplx> alpha = *coeffs;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (std::abs(alpha[k]) > 1.0 - kInteriorMargin) {
      throw Error(ErrorKind::IllConditioned, "interior coefficient reached the unit circle");
    }
  }
  alpha.back() /= std::abs(alpha.back());
  return VerblunskySet(std::move(alpha));
}

// ---------------------------------------------------------------------------

JacobiMatrix geronimus_interior(std::span<const double> alpha) {
  if (alpha.size() % 2 != 1) {
    throw Error(ErrorKind::InvalidBoundary, "expected 2n-1 interior coefficients");
  }
  const long n = static_cast<long>(alpha.size() + 1) / 2;
  for (double x : alpha) {
    if (!(x > -1.0 && x < 1.0)) {
      throw Error(ErrorKind::InvalidBoundary, "interior coefficients must lie in (-1, 1)");
    }
  }
  // alpha_{-1} = alpha_{2n-1} = -1
  auto at = [&](long k) {
    return (k < 0 || k == 2 * n - 1) ? -1.0 : alpha[static_cast<std::size_t>(k)];
  };

  std::vector<double> b(static_cast<std::size_t>(n)), a;
  a.reserve(static_cast<std::size_t>(n - 1));
  for (long k = 0; k < n; ++k) {
    const double prev = at(2 * k - 1);
    double bk = (1.0 - prev) * at(2 * k);
    if (k > 0) bk -= (1.0 + prev) * at(2 * k - 2);  // (1 + alpha_{-1}) = 0 at k = 0
    b[static_cast<std::size_t>(k)] = bk;
    if (k + 1 < n) {
      const double x = at(2 * k);
      a.push_back(std::sqrt((1.0 - prev) * (1.0 - x) * (1.0 + x) * (1.0 + at(2 * k + 1))));
    }
  }
  return JacobiMatrix(std::move(b), std::move(a));
}

JacobiMatrix geronimus(const VerblunskySet& v) {
  const std::size_t total = v.n();
  if (total % 2 != 0) {
    throw Error(ErrorKind::InvalidBoundary, "Geronimus relations need an even number of coefficients");
  }
  std::vector<double> alpha;
  alpha.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    const cplx a = v.alpha(k);
    if (std::abs(a.imag()) > 1e-12) {
      throw Error(ErrorKind::InvalidBoundary, "coefficients must be real");
    }
    alpha.push_back(a.real());
  }
  if (std::abs(alpha.back() + 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidBoundary, "alpha_{2n-1} must equal -1");
  }
  alpha.pop_back();
  return geronimus_interior(alpha);
}

SpectralMeasureLine szego_project(const SpectralMeasureCircle& mu) {
  constexpr double pi = std::numbers::pi;
  const auto theta = mu.thetas();
  const auto weight = mu.weights();
  const std::size_t n = theta.size();
  for (double t : theta) {
    if (std::abs(t) < 1e-8 || pi - std::abs(t) < 1e-8) {
      throw Error(ErrorKind::SupportAtRealAxis, "support point at z = +1 or z = -1");
    }
  }
  std::vector<bool> used(n, false);
  std::vector<double> x, w;
  for (std::size_t i = 0; i < n; ++i) {
    if (theta[i] < 0.0) continue;
    std::size_t best = n;
    double best_d = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (theta[j] >= 0.0 || used[j]) continue;
      const double d = std::abs(theta[j] + theta[i]);
      if (best == n || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best == n || best_d > 1e-10) {
      throw Error(ErrorKind::NotSymmetric, "measure is not invariant under conjugation");
    }
    if (std::abs(weight[i] - weight[best]) > 1e-8) {
      throw Error(ErrorKind::NotSymmetric, "conjugate support points carry different masses");
    }
    used[best] = true;
    x.push_back(std::cos(theta[i]) + std::cos(theta[best]));
    w.push_back(weight[i] + weight[best]);
  }
  if (2 * x.size() != n) {
    throw Error(ErrorKind::NotSymmetric, "measure is not invariant under conjugation");
  }
  return SpectralMeasureLine::normalized(std::move(x), std::move(w));
}

}  // namespace cmv
