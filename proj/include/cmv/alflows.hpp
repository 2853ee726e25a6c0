#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "cmv/core.hpp"

namespace cmv {

/// Which half of the hierarchy: Re K_m or Im K_m, K_m = tr(C^m) / m.
enum class Part { Re, Im };

std::string_view to_string(Part p) noexcept;
Part parse_part(std::string_view name);

/// Polynomial f(z) = sum_{m>=1} c_m z^m generating phi(C) = Im tr f(C).
class HamiltonianSpec {
 public:
  /// coeffs[0] is c_1. At least one coefficient must be nonzero.
  explicit HamiltonianSpec(std::vector<cplx> coeffs);

  /// f with Im tr f(C) equal to Re K_m (f = (i/m) z^m) or Im K_m (f = z^m / m).
  static HamiltonianSpec hierarchy(int m, Part part);

  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.size(); }

  cplx f(cplx z) const;
  /// F(e^{i theta}) = 2 Re[z f'(z)].
  double F(double theta) const;
  /// Im tr f(C).
  double phi(const CMatrix& C) const;

  HamiltonianSpec operator-() const;

 private:
  std::vector<cplx> coeffs_;
};

double F_of_theta(const HamiltonianSpec& spec, double theta);

/// The spectral generator of the Lax flow dC/dt = [C, lax_P(C, m, part)].
///
/// The Lax pairs (and the Ablowitz-Ladik equation) advance observables by
/// df/dt = {f, H}, while the mass law mu_j(t) ~ exp(F(z_j) t) mu_j(0) is the
/// flow of phi with the bracket taken in the opposite order. The Lax flow of
/// Re K_m is therefore the mass law for f = -(i/m) z^m, and that of Im K_m the
/// mass law for f = -z^m / m.
HamiltonianSpec lax_equivalent_spec(int m, Part part);

/// (1/m) tr(C^m)
cplx hamiltonian_K(const CMVMatrix& C, int m);
cplx hamiltonian_K(const CMatrix& C, int m);

/// Strict upper triangle plus half the diagonal.
CMatrix plus_projection(const CMatrix& A);

/// Re: i (C^m)_+ + i ((C^m)_+)^*;  Im: (C^m)_+ - ((C^m)_+)^*. Anti-Hermitian.
CMatrix lax_P(const CMatrix& C, int m, Part part);
inline CMatrix lax_P(const CMVMatrix& C, int m, Part part) { return lax_P(C.entries(), m, part); }

/// Lax partner whose flow realises `spec` in the mass-law convention
/// (linear combination of the hierarchy partners).
CMatrix lax_P(const CMatrix& C, const HamiltonianSpec& spec);

/// Recovers d(alpha)/dt from dC/dt through the entry chain
/// C_{00} = conj(alpha_0) and rho_{k-1} conj(alpha_k) along rows 2j.
/// The last entry (alpha_{n-1}) is always 0. Throws RhoTooSmall if any
/// interior rho <= 1e-10.
std::vector<cplx> extract_alpha_dot(const VerblunskySet& v, const CMatrix& C_dot);

/// d(alpha)/dt under dC/dt = [C, lax_P(C, m, part)], for all n coefficients.
std::vector<cplx> al_vector_field(const VerblunskySet& v, int m, Part part);
/// Same, for the Lax flow whose mass law is generated by `spec`.
std::vector<cplx> al_vector_field(const VerblunskySet& v, const HamiltonianSpec& spec);

/// Closed-form Re K_1 field i rho_j^2 (alpha_{j-1} + alpha_{j+1}) with a fixed
/// unimodular boundary alpha_{-1}. The CMV block layout corresponds to
/// alpha_{-1} = -1, which is the default.
std::vector<cplx> al_closed_form_field(const VerblunskySet& v, cplx alpha_minus_one = -1.0);

/// Schur flow d(alpha_j)/dt = (1 - alpha_j^2)(alpha_{j+1} - alpha_{j-1}) for
/// real interior coefficients; `before` and `after` are the fixed values of
/// alpha_{-1} and alpha_{len}.
std::vector<double> schur_vector_field(std::span<const double> alpha, double before, double after);

struct TridiagonalField {
  std::vector<double> diag;
  std::vector<double> off;
};

/// [J, P] with P = J_+ - J_- (skew part built from the off-diagonal).
TridiagonalField toda_vector_field(const JacobiMatrix& J);

/// Classical RK4 on the Toda flow.
JacobiMatrix integrate_toda(const JacobiMatrix& J, double t_final, double dt);

struct StepDiagnostics {
  double eigenvalue_drift = 0.0;     // max angular distance to the initial spectrum
  double unitarity_residual = 0.0;   // max |C^* C - I|
};

struct Trajectory {
  std::vector<double> times;
  std::vector<VerblunskySet> states;
  std::vector<StepDiagnostics> diagnostics;

  const VerblunskySet& final_state() const { return states.back(); }
  double max_eigenvalue_drift() const;
};

struct IntegrateOptions {
  std::size_t record_every = 1;  // the final state is always recorded
  bool diagnostics = true;
};

/// Fixed-step RK4 over al_vector_field. alpha_{n-1} is held exactly; throws
/// RhoTooSmall if an intermediate |alpha_k| exceeds 1 - 1e-8.
Trajectory integrate_flow(const VerblunskySet& v0, int m, Part part, double t_final, double dt,
                          const IntegrateOptions& options = {});
Trajectory integrate_flow(const VerblunskySet& v0, const HamiltonianSpec& spec, double t_final,
                          double dt, const IntegrateOptions& options = {});

/// mu_j(t) = exp(F(theta_j) t) mu_j(0) / sum_l exp(F(theta_l) t) mu_l(0),
/// evaluated in log space. Support points do not move.
SpectralMeasureCircle exact_propagate(const SpectralMeasureCircle& mu0, const HamiltonianSpec& spec,
                                      double t);

/// Eigensolve, exact_propagate, inverse spectral map.
VerblunskySet flow_via_spectral(const VerblunskySet& v0, const HamiltonianSpec& spec, double t);

/// flow_via_spectral on the grid 0, dt, 2 dt, ..., t_final (one eigensolve).
Trajectory spectral_trajectory(const VerblunskySet& v0, const HamiltonianSpec& spec, double t_final,
                               double dt, const IntegrateOptions& options = {});

struct AsymptoticReport {
  std::size_t k = 0;                // 1 <= k <= n-1; describes alpha_{k-1}
  std::vector<double> lambdas;      // F(z_j), descending
  std::vector<double> thetas;       // z_j = e^{i theta_j} in the same order
  std::vector<double> masses;       // mu_j(0) in the same order
  cplx predicted_limit;             // (-1)^{k-1} conj(z_1 ... z_k)
  double predicted_rate = 0.0;      // lambda_k - lambda_{k+1}
  cplx xi;                          // xi_{k-1}
  cplx fitted_limit;
  double fitted_rate = 0.0;
  cplx fitted_xi;
  double predicted_mass_rate = 0.0; // lambda_1 - lambda_{k+1}
  double fitted_mass_rate = 0.0;    // from log mu_{k+1}(t)
};

/// Long-time behaviour of alpha_{k-1}(t) under the mass law of `spec`.
///
/// The fit evaluates the flow on t_grid (ascending, last three points evenly
/// spaced) in extended precision: the limit by Aitken extrapolation of the
/// last three samples, the rate by log-linear regression of
/// |alpha_{k-1}(t) - limit|, the masses by regression of log mu_{k+1}(t).
/// Throws NonDistinctLambda if two F values are closer than 1e-8, and
/// IllConditioned if the grid needs more dynamic range than the working
/// precision provides.
AsymptoticReport asymptotic_report(const VerblunskySet& v0, const HamiltonianSpec& spec,
                                   std::size_t k, std::span<const double> t_grid);

/// All k = 1..n-1 at once (shares the extended-precision evaluations).
std::vector<AsymptoticReport> asymptotic_reports(const VerblunskySet& v0,
                                                 const HamiltonianSpec& spec,
                                                 std::span<const double> t_grid);

struct GaugedTrajectory {
  std::vector<double> times;
  std::vector<std::vector<cplx>> beta;  // beta_k(t) = exp(-2 i t) alpha_k(t)
};

GaugedTrajectory gauge_transform(const Trajectory& trajectory);

}  // namespace cmv
