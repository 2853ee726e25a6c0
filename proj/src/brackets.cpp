#include "cmv/brackets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cmv/alflows.hpp"
#include "cmv/opuc.hpp"

namespace cmv {

namespace {

constexpr double kBracketRhoFloor = 1e-6;
constexpr double kBranchMargin = 0.1;

VerblunskySet shifted(const VerblunskySet& v, std::size_t j, cplx delta) {
  std::vector<cplx> a(v.alpha().begin(), v.alpha().end());
  a[j] += delta;
  return VerblunskySet(std::move(a));
}

double central(const Observable& f, const VerblunskySet& v, std::size_t j, cplx dir, double h) {
  return (f(shifted(v, j, h * dir)) - f(shifted(v, j, -h * dir))) / (2.0 * h);
}

double max_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  for (double x : b) m = std::max(m, std::abs(x));
  return m;
}

double bracket_sum(const VerblunskySet& v, const std::vector<double>& fu, const std::vector<double>& fv,
                   const std::vector<double>& gu, const std::vector<double>& gv) {
  double acc = 0.0;
  for (std::size_t j = 0; j < fu.size(); ++j) {
    const double r2 = 1.0 - std::norm(v.alpha(j));
    acc += r2 * (fu[j] * gv[j] - fv[j] * gu[j]);
  }
  return acc;
}

double cot(double x) { return std::cos(x) / std::sin(x); }

}  // namespace

Observable coordinate_u(std::size_t j) {
  return {"u" + std::to_string(j), [j](const VerblunskySet& v) { return v.alpha(j).real(); }};
}

Observable coordinate_v(std::size_t j) {
  return {"v" + std::to_string(j), [j](const VerblunskySet& v) { return v.alpha(j).imag(); }};
}

Observable product(const Observable& f, const Observable& g) {
  return {f.name + "*" + g.name, [f, g](const VerblunskySet& v) { return f(v) * g(v); }};
}

Gradient gradient(const Observable& f, const VerblunskySet& v, const BracketOptions& options) {
  if (!(options.h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  const std::size_t m = v.n() - 1;
  for (std::size_t j = 0; j < m; ++j)
    if (!(v.rho(j) > kBracketRhoFloor))
      throw Error(ErrorKind::RhoTooSmall, "rho_" + std::to_string(j) + " too small for brackets");

  Gradient g;
  std::vector<double> cu(m), cv(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double h = std::min(options.h, (1.0 - std::abs(v.alpha(j))) / 4.0);
    cu[j] = central(f, v, j, 1.0, h);
    cv[j] = central(f, v, j, cplx{0.0, 1.0}, h);
    g.du_fine.push_back(central(f, v, j, 1.0, h / 2));
    g.dv_fine.push_back(central(f, v, j, cplx{0.0, 1.0}, h / 2));
    g.du.push_back((4.0 * g.du_fine[j] - cu[j]) / 3.0);
    g.dv.push_back((4.0 * g.dv_fine[j] - cv[j]) / 3.0);
  }
  double diff = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    diff = std::max({diff, std::abs(cu[j] - g.du_fine[j]), std::abs(cv[j] - g.dv_fine[j])});
  if (diff > options.gradient_tolerance * std::max(1.0, max_abs(g.du_fine, g.dv_fine)))
    throw Error(ErrorKind::NonDifferentiable, "gradient of " + f.name + " unstable under step halving");
  return g;
}

BracketReport al_bracket(const Gradient& f, const Gradient& g, const VerblunskySet& v,
                         const BracketOptions& options) {
  BracketReport r;
  r.h_coarse = options.h;
  r.h_fine = options.h / 2;
  r.value = bracket_sum(v, f.du, f.dv, g.du, g.dv);
  r.error_estimate = std::abs(r.value - bracket_sum(v, f.du_fine, f.dv_fine, g.du_fine, g.dv_fine));
  return r;
}

BracketReport al_bracket(const Observable& f, const Observable& g, const VerblunskySet& v,
                         const BracketOptions& options) {
  return al_bracket(gradient(f, v, options), gradient(g, v, options), v, options);
}

ComplexBrackets verblunsky_brackets(const VerblunskySet& v, std::size_t k, std::size_t l,
                                    const BracketOptions& options) {
  if (k + 1 >= v.n() || l + 1 >= v.n()) throw Error(ErrorKind::OutOfRange, "not an interior index");
  const auto uk = gradient(coordinate_u(k), v, options), vk = gradient(coordinate_v(k), v, options);
  const auto ul = gradient(coordinate_u(l), v, options), vl = gradient(coordinate_v(l), v, options);
  const double uu = al_bracket(uk, ul, v, options).value;
  const double uv = al_bracket(uk, vl, v, options).value;
  const double vu = al_bracket(vk, ul, v, options).value;
  const double vv = al_bracket(vk, vl, v, options).value;
  const cplx i{0.0, 1.0};
  return {uu + i * uv + i * vu - vv, uu - i * uv + i * vu + vv};
}

SpectralObservables::SpectralObservables(const VerblunskySet& base, double min_separation) {
  auto mu = unitary_eigensystem(build_cmv(base));
  const auto th = mu.thetas();
  for (std::size_t j = 0; j < th.size(); ++j) {
    const double next = j + 1 < th.size() ? th[j + 1] : th[0] + 2.0 * std::numbers::pi;
    if (th.size() > 1 && next - th[j] <= min_separation)
      throw Error(ErrorKind::DegenerateSpectrum, "eigenvalues closer than the separation floor");
  }
  data_ = std::make_shared<const Data>(Data{std::move(mu)});
}

SpectralObservables::Labeled SpectralObservables::evaluate(const VerblunskySet& v) const {
  const auto cur = unitary_eigensystem(build_cmv(v));
  const auto& base = data_->base;
  if (cur.size() != base.size()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  Labeled out;
  for (std::size_t j = 0; j < base.size(); ++j) {
    const double t0 = base.thetas()[j];
    double best = std::numeric_limits<double>::infinity(), second = best;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const double d = std::abs(wrap_angle(cur.thetas()[i] - t0));
      if (d < best) {
        second = best;
        best = d;
        idx = i;
      } else if (d < second) {
        second = d;
      }
    }
    if (cur.size() > 1 && second < 2.0 * best)
      throw Error(ErrorKind::MatchingAmbiguous, "eigenvalue labelling is ambiguous");
    out.theta.push_back(t0 + wrap_angle(cur.thetas()[idx] - t0));
    out.mu.push_back(cur.weights()[idx]);
  }
  return out;
}

Observable SpectralObservables::theta(std::size_t j) const {
  if (j >= size()) throw Error(ErrorKind::OutOfRange, "eigenvalue label out of range");
  SpectralObservables self = *this;
  return {"theta" + std::to_string(j), [self, j](const VerblunskySet& v) { return self.evaluate(v).theta[j]; }};
}

Observable SpectralObservables::mass(std::size_t j) const {
  if (j >= size()) throw Error(ErrorKind::OutOfRange, "eigenvalue label out of range");
  SpectralObservables self = *this;
  return {"mu" + std::to_string(j), [self, j](const VerblunskySet& v) { return self.evaluate(v).mu[j]; }};
}

Observable SpectralObservables::log_mass_ratio(std::size_t j, std::size_t l) const {
  if (j >= size() || l >= size()) throw Error(ErrorKind::OutOfRange, "eigenvalue label out of range");
  SpectralObservables self = *this;
  return {"log(mu" + std::to_string(j) + "/mu" + std::to_string(l) + ")",
          [self, j, l](const VerblunskySet& v) {
            const auto e = self.evaluate(v);
            return std::log(e.mu[j] / e.mu[l]);
          }};
}

Observable SpectralObservables::total_mass() const {
  SpectralObservables self = *this;
  return {"sum(mu)", [self](const VerblunskySet& v) {
            const auto e = self.evaluate(v);
            double s = 0.0;
            for (double x : e.mu) s += x;
            return s;
          }};
}

SpectralObservables spectral_observables(const VerblunskySet& v) { return SpectralObservables(v); }

HamiltonianObservables hamiltonian_observables(int m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  const std::string suffix = std::to_string(m);
  return {{"ReK" + suffix, [m](const VerblunskySet& v) { return hamiltonian_K(build_cmv(v), m).real(); }},
          {"ImK" + suffix, [m](const VerblunskySet& v) { return hamiltonian_K(build_cmv(v), m).imag(); }}};
}

double cotangent_residual(const VerblunskySet& v, std::array<std::size_t, 3> labels,
                          const BracketOptions& options) {
  if (v.n() < 3) throw Error(ErrorKind::InvalidArgument, "cotangent identity needs n >= 3");
  const auto [a, b, c] = labels;
  if (a == b || b == c || a == c) throw Error(ErrorKind::InvalidArgument, "labels must be distinct");
  const SpectralObservables so(v);
  const double lhs = al_bracket(so.log_mass_ratio(b, a), so.log_mass_ratio(c, a), v, options).value;
  const auto th = so.base_measure().thetas();
  const double ta = th[a], tb = th[b], tc = th[c];
  const double rhs = 2.0 * cot((ta - tb) / 2) + 2.0 * cot((tb - tc) / 2) + 2.0 * cot((tc - ta) / 2);
  return lhs - rhs;
}

double spectral_to_verblunsky_jacobian(const SpectralMeasureCircle& mu, double h) {
  const std::size_t n = mu.size();
  const auto th0 = mu.thetas();
  const auto w0 = mu.weights();
  const VerblunskySet v0 = verblunsky_from_measure(mu);
  const double phi0 = std::arg(v0.last());
  if (std::numbers::pi - std::abs(phi0) < kBranchMargin)
    throw Error(ErrorKind::BranchProximity, "arg alpha_{n-1} too close to the branch cut");

  double sep = 2.0 * std::numbers::pi;
  for (std::size_t j = 0; j < n && n > 1; ++j) {
    const double next = j + 1 < n ? th0[j + 1] : th0[0] + 2.0 * std::numbers::pi;
    sep = std::min(sep, next - th0[j]);
  }
  const double step = std::min({h, sep / 8.0, *std::min_element(w0.begin(), w0.end()) / 4.0});

  const std::size_t dim = 2 * n - 1;
  std::vector<double> x0(dim);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    x0[2 * j] = th0[j];
    x0[2 * j + 1] = w0[j];
  }
  x0[dim - 1] = th0[n - 1];

  auto map = [&](const std::vector<double>& x) {
    std::vector<double> th(n), w(n);
    double rest = 1.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      th[j] = x[2 * j];
      w[j] = x[2 * j + 1];
      rest -= w[j];
    }
    th[n - 1] = x[dim - 1];
    w[n - 1] = rest;
    const VerblunskySet v = verblunsky_from_measure(SpectralMeasureCircle(th, w));
    Eigen::VectorXd y(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k + 1 < n; ++k) {
      y(Eigen::Index(2 * k)) = v.alpha(k).real();
      y(Eigen::Index(2 * k + 1)) = v.alpha(k).imag();
    }
    y(Eigen::Index(dim - 1)) = phi0 + wrap_angle(std::arg(v.last()) - phi0);
    return y;
  };
  auto column = [&](std::size_t c, double s) {
    std::vector<double> xp = x0, xm = x0;
    xp[c] += s;
    xm[c] -= s;
    return Eigen::VectorXd((map(xp) - map(xm)) / (xp[c] - xm[c]));
  };

  RMatrix J(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c)
    J.col(Eigen::Index(c)) = (4.0 * column(c, step / 2) - column(c, step)) / 3.0;
  return J.determinant();
}

double jacobian_formula(const SpectralMeasureCircle& mu) {
  const std::size_t n = mu.size();
  const VerblunskySet v = verblunsky_from_measure(mu);
  double value = -std::ldexp(1.0, 1 - static_cast<int>(n));
  for (std::size_t k = 0; k + 1 < n; ++k) value *= 1.0 - std::norm(v.alpha(k));
  for (double w : mu.weights()) value /= w;
  return value;
}

}  // namespace cmv
