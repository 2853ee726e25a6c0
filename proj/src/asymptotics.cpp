// Long-time asymptotics of the Verblunsky coefficients under the mass law.
//
// The masses separate like exp((lambda_j - lambda_l) t), so the Szegő
// recursion is run in 320-digit binary floating point; only the fitted
// quantities are rounded back to double.

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "cmv/alflows.hpp"
#include "cmv/detail/szego.hpp"
#include "cmv/opuc.hpp"

namespace cmv {

namespace {

namespace mp = boost::multiprecision;

constexpr unsigned kDigits = 320;
constexpr double kGuardDigits = 40.0;
constexpr double kLambdaGap = 1e-8;

using Real = mp::number<mp::cpp_bin_float<kDigits>, mp::et_off>;
using Complex = mp::cpp_complex<kDigits>;

struct Line {
  double slope;
  double intercept;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::InvalidArgument, "time grid needs two distinct points");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

cplx to_double(const Complex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

void check_grid(std::span<const double> t) {
  if (t.size() < 4) throw Error(ErrorKind::InvalidArgument, "time grid needs at least 4 points");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || t[i] < 0.0)
      throw Error(ErrorKind::InvalidArgument, "time grid must be finite and non-negative");
    if (i > 0 && !(t[i] > t[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "time grid must be strictly ascending");
  }
  const std::size_t e = t.size() - 1;
  const double h1 = t[e - 1] - t[e - 2], h2 = t[e] - t[e - 1];
  if (std::abs(h1 - h2) > 1e-9 * std::max(1.0, t[e]))
    throw Error(ErrorKind::InvalidArgument, "last three grid points must be evenly spaced");
}

}  // namespace

std::vector<AsymptoticReport> asymptotic_reports(const VerblunskySet& v0,
                                                 const HamiltonianSpec& spec,
                                                 std::span<const double> t_grid) {
  check_grid(t_grid);
  const auto mu0 = unitary_eigensystem(build_cmv(v0));
  const std::size_t n = mu0.size();
  if (n < 2) return {};

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> lambda_raw(n);
  for (std::size_t j = 0; j < n; ++j) lambda_raw[j] = spec.F(mu0.thetas()[j]);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lambda_raw[a] > lambda_raw[b]; });

  std::vector<double> lambda(n), theta(n), mass(n);
  for (std::size_t j = 0; j < n; ++j) {
    lambda[j] = lambda_raw[order[j]];
    theta[j] = mu0.thetas()[order[j]];
    mass[j] = mu0.weights()[order[j]];
  }
  for (std::size_t j = 0; j + 1 < n; ++j)
    if (lambda[j] - lambda[j + 1] < kLambdaGap)
      throw Error(ErrorKind::NonDistinctLambda, "F takes (nearly) equal values at two support points");

  // Decimal digits consumed: spread of the masses plus the depth at which
  // the slowest correction is resolved.
  const double t_max = t_grid.back();
  const double spread = lambda.front() - lambda.back();
  const double needed = (2.0 * spread * t_max - std::log(*std::min_element(mass.begin(), mass.end()))) /
                            std::log(10.0) + kGuardDigits;
  if (needed > double(kDigits))
    throw Error(ErrorKind::IllConditioned, "time grid exceeds the extended-precision range");

  std::vector<Complex> z(n);
  std::vector<Real> log_mass(n), lam(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Real th(theta[j]);
    z[j] = Complex(cos(th), sin(th));
    log_mass[j] = log(Real(mass[j]));
    lam[j] = Real(lambda[j]);
  }

  const std::size_t T = t_grid.size();
  std::vector<std::vector<Complex>> alpha(T);  // alpha[i][k] = alpha_k(t_i)
  std::vector<std::vector<double>> log_mu(T);
  const Real min_norm2 = pow(Real(10), -int(kDigits) + 10);
  for (std::size_t i = 0; i < T; ++i) {
    const Real t(t_grid[i]);
    std::vector<Real> lw(n);
    for (std::size_t j = 0; j < n; ++j) lw[j] = log_mass[j] + lam[j] * t;
    const Real top = *std::max_element(lw.begin(), lw.end());
    std::vector<Real> w(n);
    Real sum(0);
    for (std::size_t j = 0; j < n; ++j) sum += (w[j] = exp(lw[j] - top));
    for (auto& x : w) x /= sum;
    const Real log_sum = log(sum);
    for (std::size_t j = 0; j < n; ++j)
      log_mu[i].push_back(static_cast<double>(lw[j] - top - log_sum));
    auto a = detail::szego_coefficients<Complex, Real>(z, w, n - 1, min_norm2);
    if (!a) throw Error(ErrorKind::IllConditioned, "extended-precision Szegő recursion degenerated");
    alpha[i] = std::move(*a);
  }

  std::vector<AsymptoticReport> out;
  for (std::size_t k = 1; k < n; ++k) {
    AsymptoticReport r;
    r.k = k;
    r.lambdas = lambda;
    r.thetas = theta;
    r.masses = mass;

    cplx prod{1.0, 0.0};
    for (std::size_t j = 0; j < k; ++j) prod *= std::polar(1.0, theta[j]);
    r.predicted_limit = ((k - 1) % 2 == 0 ? 1.0 : -1.0) * std::conj(prod);
    r.predicted_rate = lambda[k - 1] - lambda[k];

    const cplx zk = std::polar(1.0, theta[k - 1]), zk1 = std::polar(1.0, theta[k]);
    double factor = mass[k] / mass[k - 1];
    for (std::size_t l = 0; l + 1 < k; ++l) {
      const cplx zl = std::polar(1.0, theta[l]);
      factor *= std::norm((zk1 - zl) / (zk - zl));
    }
    r.xi = (zk * std::conj(zk1) - 1.0) * factor;

    // Aitken extrapolation on the last three samples.
    const Complex& a0 = alpha[T - 3][k - 1];
    const Complex& a1 = alpha[T - 2][k - 1];
    const Complex& a2 = alpha[T - 1][k - 1];
    const Complex denom = a2 - a1 * 2 + a0;
    const Complex limit = abs(denom) == 0 ? a2 : Complex(a2 * a0 - a1 * a1) / denom;
    r.fitted_limit = to_double(limit);

    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < T; ++i) {
      const Real d = abs(Complex(alpha[i][k - 1] - limit));
      if (d > 0) {
        ts.push_back(t_grid[i]);
        logs.push_back(static_cast<double>(log(d)));
      }
    }
    if (ts.size() < 2) throw Error(ErrorKind::IllConditioned, "trajectory converged before the grid");
    const Line fit = least_squares(ts, logs);
    r.fitted_rate = -fit.slope;

    // Correction coefficient from the second half of the grid.
    cplx acc{};
    std::size_t used = 0;
    for (std::size_t i = T / 2; i < T; ++i) {
      const Complex rel = Complex(alpha[i][k - 1] / limit) - 1;
      acc += to_double(rel) * std::exp(r.fitted_rate * t_grid[i]);
      ++used;
    }
    r.fitted_xi = acc / double(used);

    std::vector<double> lm;
    for (std::size_t i = 0; i < T; ++i) lm.push_back(log_mu[i][k]);
    r.predicted_mass_rate = lambda[0] - lambda[k];
    r.fitted_mass_rate = -least_squares({t_grid.begin(), t_grid.end()}, lm).slope;
    out.push_back(std::move(r));
  }
  return out;
}

AsymptoticReport asymptotic_report(const VerblunskySet& v0, const HamiltonianSpec& spec,
                                   std::size_t k, std::span<const double> t_grid) {
  if (k < 1 || k >= v0.n()) throw Error(ErrorKind::OutOfRange, "k must satisfy 1 <= k <= n-1");
  return asymptotic_reports(v0, spec, t_grid).at(k - 1);
}

}  // namespace cmv
