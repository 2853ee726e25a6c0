#include "cmv/alflows.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "cmv/opuc.hpp"

namespace cmv {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kRhoFloor = 1e-10;
constexpr double kFlowMargin = 1e-8;

// One Lax partner term: coefficient * lax_P(C, m, part).
struct LaxTerm {
  int m;
  Part part;
  double weight;
};

std::vector<LaxTerm> lax_terms(const HamiltonianSpec& spec) {
  // For f = sum c_m z^m, Im tr f(C) = sum_m m (Im c_m Re K_m + Re c_m Im K_m).
  // Each hierarchy Lax flow realises minus its own mass law.
  std::vector<LaxTerm> terms;
  const auto c = spec.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int m = static_cast<int>(i + 1);
    if (c[i].imag() != 0.0) terms.push_back({m, Part::Re, -m * c[i].imag()});
    if (c[i].real() != 0.0) terms.push_back({m, Part::Im, -m * c[i].real()});
  }
  return terms;
}

CMatrix lax_P_terms(const CMatrix& C, const std::vector<LaxTerm>& terms) {
  const Eigen::Index n = C.rows();
  CMatrix P = CMatrix::Zero(n, n);
  int max_m = 0;
  for (const auto& t : terms) max_m = std::max(max_m, t.m);
  CMatrix power = CMatrix::Identity(n, n);
  for (int m = 1; m <= max_m; ++m) {
    power = power * C;
    for (const auto& t : terms) {
      if (t.m != m) continue;
      const CMatrix plus = plus_projection(power);
      if (t.part == Part::Re)
        P += t.weight * (kI * (plus + plus.adjoint()));
      else
        P += t.weight * (plus - plus.adjoint());
    }
  }
  return P;
}

std::vector<cplx> field_from_terms(const VerblunskySet& v, const std::vector<LaxTerm>& terms) {
  const CMatrix C = build_cmv(v).entries();
  const CMatrix P = lax_P_terms(C, terms);
  return extract_alpha_dot(v, C * P - P * C);
}

double unitarity_residual(const CMatrix& C) {
  const Eigen::Index n = C.rows();
  return (C.adjoint() * C - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

std::vector<double> eigen_angles(const CMatrix& C) {
  Eigen::ComplexEigenSolver<CMatrix> solver(C, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    out.push_back(std::arg(solver.eigenvalues()(i)));
  return out;
}

double angular_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

double spectrum_drift(const std::vector<double>& reference, const std::vector<double>& current) {
  double worst = 0.0;
  for (double r : reference) {
    double best = std::numbers::pi;
    for (double c : current) best = std::min(best, angular_distance(r, c));
    worst = std::max(worst, best);
  }
  return worst;
}

std::size_t step_count(double t_final, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final))
    throw Error(ErrorKind::InvalidArgument, "t must be finite and non-negative");
  const double ratio = t_final / dt;
  return static_cast<std::size_t>(std::ceil(ratio - 1e-9));
}

VerblunskySet checked_state(const VerblunskySet& from, const std::vector<cplx>& k, double h) {
  std::vector<cplx> alpha(from.alpha().begin(), from.alpha().end());
  for (std::size_t j = 0; j + 1 < alpha.size(); ++j) {
    alpha[j] += h * k[j];
    if (!(std::abs(alpha[j]) <= 1.0 - kFlowMargin))
      throw Error(ErrorKind::RhoTooSmall,
                  "flow left the disk interior at alpha_" + std::to_string(j));
  }
  return VerblunskySet(std::move(alpha));
}

template <class Field>
Trajectory rk4(const VerblunskySet& v0, Field&& field, double t_final, double dt,
               const IntegrateOptions& options) {
  const std::size_t steps = step_count(t_final, dt);
  const double h = steps == 0 ? 0.0 : t_final / static_cast<double>(steps);
  const std::size_t every = std::max<std::size_t>(options.record_every, 1);

  Trajectory out;
  std::vector<double> reference;
  auto record = [&](double t, const VerblunskySet& v) {
    out.times.push_back(t);
    out.states.push_back(v);
    StepDiagnostics d;
    if (options.diagnostics) {
      const CMatrix C = build_cmv(v).entries();
      const auto angles = eigen_angles(C);
      if (reference.empty()) reference = angles;
      d.eigenvalue_drift = spectrum_drift(reference, angles);
      d.unitarity_residual = unitarity_residual(C);
    }
    out.diagnostics.push_back(d);
  };

  VerblunskySet v = v0;
  record(0.0, v);
  for (std::size_t s = 1; s <= steps; ++s) {
    const auto k1 = field(v);
    const auto k2 = field(checked_state(v, k1, h / 2));
    const auto k3 = field(checked_state(v, k2, h / 2));
    const auto k4 = field(checked_state(v, k3, h));
    std::vector<cplx> incr(v.n());
    for (std::size_t j = 0; j < v.n(); ++j) incr[j] = (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) / 6.0;
    v = checked_state(v, incr, h);
    if (s % every == 0 || s == steps) record(h * static_cast<double>(s), v);
  }
  return out;
}

}  // namespace

std::string_view to_string(Part p) noexcept { return p == Part::Re ? "re" : "im"; }

Part parse_part(std::string_view name) {
  if (name == "re") return Part::Re;
  if (name == "im") return Part::Im;
  throw Error(ErrorKind::InvalidArgument, "part must be 're' or 'im'");
}

HamiltonianSpec::HamiltonianSpec(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
  if (coeffs_.empty()) throw Error(ErrorKind::InvalidArgument, "Hamiltonian polynomial is zero");
  for (const auto& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorKind::InvalidArgument, "non-finite Hamiltonian coefficient");
}

HamiltonianSpec HamiltonianSpec::hierarchy(int m, Part part) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  std::vector<cplx> c(static_cast<std::size_t>(m));
  c.back() = part == Part::Re ? kI / double(m) : cplx{1.0 / m, 0.0};
  return HamiltonianSpec(std::move(c));
}

cplx HamiltonianSpec::f(cplx z) const {
  cplx acc{};
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = (acc + coeffs_[i]) * z;
  return acc;
}

double HamiltonianSpec::F(double theta) const {
  cplx acc{};
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    acc += double(i + 1) * coeffs_[i] * std::polar(1.0, double(i + 1) * theta);
  return 2.0 * acc.real();
}

double HamiltonianSpec::phi(const CMatrix& C) const {
  const Eigen::Index n = C.rows();
  CMatrix power = CMatrix::Identity(n, n);
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    power = power * C;
    acc += (coeffs_[i] * power.trace()).imag();
  }
  return acc;
}

HamiltonianSpec HamiltonianSpec::operator-() const {
  std::vector<cplx> c = coeffs_;
  for (auto& x : c) x = -x;
  return HamiltonianSpec(std::move(c));
}

double F_of_theta(const HamiltonianSpec& spec, double theta) { return spec.F(theta); }

HamiltonianSpec lax_equivalent_spec(int m, Part part) { return -HamiltonianSpec::hierarchy(m, part); }

cplx hamiltonian_K(const CMatrix& C, int m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  CMatrix power = C;
  for (int i = 1; i < m; ++i) power = power * C;
  return power.trace() / double(m);
}

cplx hamiltonian_K(const CMVMatrix& C, int m) { return hamiltonian_K(C.entries(), m); }

CMatrix plus_projection(const CMatrix& A) {
  CMatrix out = A.triangularView<Eigen::StrictlyUpper>();
  out.diagonal() = 0.5 * A.diagonal();
  return out;
}

CMatrix lax_P(const CMatrix& C, int m, Part part) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  return lax_P_terms(C, {{m, part, 1.0}});
}

CMatrix lax_P(const CMatrix& C, const HamiltonianSpec& spec) { return lax_P_terms(C, lax_terms(spec)); }

std::vector<cplx> extract_alpha_dot(const VerblunskySet& v, const CMatrix& C_dot) {
  const std::size_t n = v.n();
  if (C_dot.rows() != Eigen::Index(n) || C_dot.cols() != Eigen::Index(n))
    throw Error(ErrorKind::InvalidArgument, "dC/dt has the wrong shape");
  for (std::size_t k = 0; k + 1 < n; ++k)
    if (!(v.rho(k) > kRhoFloor))
      throw Error(ErrorKind::RhoTooSmall, "rho_" + std::to_string(k) + " too small");

  std::vector<cplx> ad(n, cplx{});
  std::vector<double> rd(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (k == 0) {
      ad[0] = std::conj(C_dot(0, 0));
    } else {
      const auto r = Eigen::Index(k % 2 == 1 ? k - 1 : k);
      const auto c = Eigen::Index(k % 2 == 1 ? k : k - 1);
      ad[k] = std::conj((C_dot(r, c) - rd[k - 1] * std::conj(v.alpha(k))) / v.rho(k - 1));
    }
    rd[k] = -(std::conj(v.alpha(k)) * ad[k]).real() / v.rho(k);
  }
  return ad;
}

std::vector<cplx> al_vector_field(const VerblunskySet& v, int m, Part part) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  return field_from_terms(v, {{m, part, 1.0}});
}

std::vector<cplx> al_vector_field(const VerblunskySet& v, const HamiltonianSpec& spec) {
  return field_from_terms(v, lax_terms(spec));
}

std::vector<cplx> al_closed_form_field(const VerblunskySet& v, cplx alpha_minus_one) {
  if (std::abs(std::abs(alpha_minus_one) - 1.0) > kBoundaryTolerance)
    throw Error(ErrorKind::InvalidBoundary, "alpha_{-1} must be unimodular");
  const std::size_t n = v.n();
  std::vector<cplx> out(n, cplx{});
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const cplx before = j == 0 ? alpha_minus_one : v.alpha(j - 1);
    const double r2 = 1.0 - std::norm(v.alpha(j));
    out[j] = kI * r2 * (before + v.alpha(j + 1));
  }
  return out;
}

std::vector<double> schur_vector_field(std::span<const double> alpha, double before, double after) {
  const std::size_t len = alpha.size();
  for (double a : alpha)
    if (!(std::abs(a) < 1.0)) throw Error(ErrorKind::OutOfRange, "Schur flow coefficient outside (-1, 1)");
  std::vector<double> out(len);
  for (std::size_t j = 0; j < len; ++j) {
    const double prev = j == 0 ? before : alpha[j - 1];
    const double next = j + 1 == len ? after : alpha[j + 1];
    out[j] = (1.0 - alpha[j] * alpha[j]) * (next - prev);
  }
  return out;
}

TridiagonalField toda_vector_field(const JacobiMatrix& J) {
  const RMatrix A = J.dense();
  const Eigen::Index n = A.rows();
  RMatrix P = RMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    P(k, k + 1) = A(k, k + 1);
    P(k + 1, k) = -A(k, k + 1);
  }
  const RMatrix D = A * P - P * A;
  TridiagonalField out;
  for (Eigen::Index k = 0; k < n; ++k) out.diag.push_back(D(k, k));
  for (Eigen::Index k = 0; k + 1 < n; ++k) out.off.push_back(D(k, k + 1));
  return out;
}

JacobiMatrix integrate_toda(const JacobiMatrix& J, double t_final, double dt) {
  const std::size_t steps = step_count(t_final, dt);
  const double h = steps == 0 ? 0.0 : t_final / double(steps);
  std::vector<double> b(J.b().begin(), J.b().end()), a(J.a().begin(), J.a().end());
  auto shifted = [&](const TridiagonalField& k, double s) {
    std::vector<double> bb = b, aa = a;
    for (std::size_t i = 0; i < bb.size(); ++i) bb[i] += s * k.diag[i];
    for (std::size_t i = 0; i < aa.size(); ++i) aa[i] += s * k.off[i];
    return JacobiMatrix(std::move(bb), std::move(aa));
  };
  for (std::size_t s = 0; s < steps; ++s) {
    const JacobiMatrix cur(b, a);
    const auto k1 = toda_vector_field(cur);
    const auto k2 = toda_vector_field(shifted(k1, h / 2));
    const auto k3 = toda_vector_field(shifted(k2, h / 2));
    const auto k4 = toda_vector_field(shifted(k3, h));
    for (std::size_t i = 0; i < b.size(); ++i)
      b[i] += h / 6 * (k1.diag[i] + 2 * k2.diag[i] + 2 * k3.diag[i] + k4.diag[i]);
    for (std::size_t i = 0; i < a.size(); ++i)
      a[i] += h / 6 * (k1.off[i] + 2 * k2.off[i] + 2 * k3.off[i] + k4.off[i]);
  }
  return JacobiMatrix(std::move(b), std::move(a));
}

double Trajectory::max_eigenvalue_drift() const {
  double worst = 0.0;
  for (const auto& d : diagnostics) worst = std::max(worst, d.eigenvalue_drift);
  return worst;
}

Trajectory integrate_flow(const VerblunskySet& v0, int m, Part part, double t_final, double dt,
                          const IntegrateOptions& options) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  const std::vector<LaxTerm> terms{{m, part, 1.0}};
  return rk4(v0, [&](const VerblunskySet& v) { return field_from_terms(v, terms); }, t_final, dt,
             options);
}

Trajectory integrate_flow(const VerblunskySet& v0, const HamiltonianSpec& spec, double t_final,
                          double dt, const IntegrateOptions& options) {
  const auto terms = lax_terms(spec);
  return rk4(v0, [&](const VerblunskySet& v) { return field_from_terms(v, terms); }, t_final, dt,
             options);
}

SpectralMeasureCircle exact_propagate(const SpectralMeasureCircle& mu0, const HamiltonianSpec& spec,
                                      double t) {
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "t must be finite");
  const std::size_t n = mu0.size();
  std::vector<double> logw(n);
  for (std::size_t j = 0; j < n; ++j)
    logw[j] = std::log(mu0.weights()[j]) + spec.F(mu0.thetas()[j]) * t;
  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> w(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += (w[j] = std::exp(logw[j] - top));
  for (std::size_t j = 0; j < n; ++j) {
    w[j] /= sum;
    if (!(w[j] > 0.0))
      throw Error(ErrorKind::IllConditioned, "propagated mass underflows in double precision");
  }
  return SpectralMeasureCircle::normalized({mu0.thetas().begin(), mu0.thetas().end()}, std::move(w));
}

VerblunskySet flow_via_spectral(const VerblunskySet& v0, const HamiltonianSpec& spec, double t) {
  return verblunsky_from_measure(exact_propagate(unitary_eigensystem(build_cmv(v0)), spec, t));
}

Trajectory spectral_trajectory(const VerblunskySet& v0, const HamiltonianSpec& spec, double t_final,
                               double dt, const IntegrateOptions& options) {
  const std::size_t steps = step_count(t_final, dt);
  const double h = steps == 0 ? 0.0 : t_final / double(steps);
  const std::size_t every = std::max<std::size_t>(options.record_every, 1);
  const auto mu0 = unitary_eigensystem(build_cmv(v0));
  const std::vector<double> reference(mu0.thetas().begin(), mu0.thetas().end());

  Trajectory out;
  for (std::size_t s = 0; s <= steps; ++s) {
    if (s != 0 && s % every != 0 && s != steps) continue;
    const double t = h * double(s);
    VerblunskySet v = s == 0 ? v0 : verblunsky_from_measure(exact_propagate(mu0, spec, t));
    StepDiagnostics d;
    if (options.diagnostics) {
      const CMatrix C = build_cmv(v).entries();
      d.eigenvalue_drift = spectrum_drift(reference, eigen_angles(C));
      d.unitarity_residual = unitarity_residual(C);
    }
    out.times.push_back(t);
    out.states.push_back(std::move(v));
    out.diagnostics.push_back(d);
  }
  return out;
}

GaugedTrajectory gauge_transform(const Trajectory& trajectory) {
  GaugedTrajectory out;
  out.times = trajectory.times;
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    const cplx phase = std::polar(1.0, -2.0 * trajectory.times[i]);
    std::vector<cplx> beta(trajectory.states[i].alpha().begin(), trajectory.states[i].alpha().end());
    for (auto& b : beta) b *= phase;
    out.beta.push_back(std::move(beta));
  }
  return out;
}

}  // namespace cmv
