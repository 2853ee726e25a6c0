#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cmv/core.hpp"

namespace cmv {

/// Real function of the interior coordinates u_j = Re alpha_j, v_j = Im alpha_j
/// (alpha_{n-1} held fixed).
struct Observable {
  std::string name;
  std::function<double(const VerblunskySet&)> eval;

  double operator()(const VerblunskySet& v) const { return eval(v); }
};

Observable coordinate_u(std::size_t j);
Observable coordinate_v(std::size_t j);
Observable product(const Observable& f, const Observable& g);

struct BracketOptions {
  double h = 1e-5;
  /// Max-norm disagreement allowed between the h and h/2 gradients,
  /// relative to max(1, |gradient|).
  double gradient_tolerance = 1e-4;
};

struct Gradient {
  std::vector<double> du;  // Richardson-extrapolated partials, one per interior j
  std::vector<double> dv;
  std::vector<double> du_fine;  // plain central differences at the half step
  std::vector<double> dv_fine;
};

/// Central differences at h and h/2 with Richardson extrapolation. The step
/// for coordinate j is capped at (1 - |alpha_j|) / 4. Throws RhoTooSmall if
/// some rho_j <= 1e-6 and NonDifferentiable if the two step sizes disagree.
Gradient gradient(const Observable& f, const VerblunskySet& v, const BracketOptions& options = {});

struct BracketReport {
  double value = 0.0;
  double h_coarse = 0.0;
  double h_fine = 0.0;
  double error_estimate = 0.0;  // |extrapolated - fine-step value|
};

/// {f, g} = sum_j rho_j^2 (df/du_j dg/dv_j - df/dv_j dg/du_j).
BracketReport al_bracket(const Observable& f, const Observable& g, const VerblunskySet& v,
                         const BracketOptions& options = {});
BracketReport al_bracket(const Gradient& f, const Gradient& g, const VerblunskySet& v,
                         const BracketOptions& options = {});

struct ComplexBrackets {
  cplx alpha_alpha;     // {alpha_k, alpha_l}
  cplx alpha_alphabar;  // {alpha_k, conj(alpha_l)}
};

/// Complex brackets assembled from the four real coordinate brackets.
ComplexBrackets verblunsky_brackets(const VerblunskySet& v, std::size_t k, std::size_t l,
                                    const BracketOptions& options = {});

/// Eigenvalue angles and masses of C(v), labelled consistently with a base
/// point: each base eigenvalue is matched to the nearest perturbed one, and
/// angles are unwrapped around the base values.
class SpectralObservables {
 public:
  struct Labeled {
    std::vector<double> theta;
    std::vector<double> mu;
  };

  /// Throws DegenerateSpectrum if two eigenvalues are within min_separation.
  explicit SpectralObservables(const VerblunskySet& base, double min_separation = 1e-6);

  const SpectralMeasureCircle& base_measure() const noexcept { return data_->base; }
  std::size_t size() const noexcept { return data_->base.size(); }

  /// Throws MatchingAmbiguous if the second-nearest candidate is within twice
  /// the nearest distance.
  Labeled evaluate(const VerblunskySet& v) const;

  Observable theta(std::size_t j) const;
  Observable mass(std::size_t j) const;
  /// log(mu_j / mu_l)
  Observable log_mass_ratio(std::size_t j, std::size_t l) const;
  Observable total_mass() const;

 private:
  struct Data {
    SpectralMeasureCircle base;
  };
  std::shared_ptr<const Data> data_;
};

SpectralObservables spectral_observables(const VerblunskySet& v);

struct HamiltonianObservables {
  Observable re;  // Re K_m
  Observable im;  // Im K_m
};

HamiltonianObservables hamiltonian_observables(int m);

/// {log(mu_b/mu_a), log(mu_c/mu_a)} minus
/// 2cot((th_a-th_b)/2) + 2cot((th_b-th_c)/2) + 2cot((th_c-th_a)/2)
/// for labels (a, b, c) in the base ordering (ascending angle).
double cotangent_residual(const VerblunskySet& v, std::array<std::size_t, 3> labels,
                          const BracketOptions& options = {});

/// Determinant of d(u_0, v_0, ..., u_{n-2}, v_{n-2}, phi) /
/// d(theta_1, mu_1, ..., theta_{n-1}, mu_{n-1}, theta_n), with phi = arg
/// alpha_{n-1} and mu_n = 1 - sum of the others. Central differences with
/// Richardson extrapolation; the step defaults to 1e-3 and is capped by the
/// smallest mass and the point separation. Throws BranchProximity if phi is
/// within 0.1 of +-pi.
double spectral_to_verblunsky_jacobian(const SpectralMeasureCircle& mu, double h = 1e-3);

/// -2^{1-n} (rho_0^2 ... rho_{n-2}^2) / (mu_1 ... mu_n)
double jacobian_formula(const SpectralMeasureCircle& mu);

}  // namespace cmv
