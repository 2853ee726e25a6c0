#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "cmv/core.hpp"

namespace cmv {

enum class Family { circular, jacobi, hermite };

std::string_view to_string(Family f) noexcept;
Family parse_family(std::string_view name);

struct EnsembleSpec {
  Family family = Family::circular;
  std::size_t n = 1;
  double beta = 2.0;
  double a = 0.0;  // jacobi only
  double b = 0.0;  // jacobi only

  /// Throws InvalidParams unless n >= 1, beta > 0 and (jacobi) a, b > -1.
  void validate() const;
};

/// Reproducible random stream: (seed, stream_id) fully determines the
/// sequence. Distinct stream ids are used for independent replicas.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Uniform on (0, 1].
  double uniform_open_closed();
  double uniform_angle();  // [0, 2 pi)
  double normal();
  double gamma(double shape);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Theta_nu on the closed disk: nu = 1 is uniform on the circle; nu > 1 has
/// density (nu-1)/(2 pi) (1-|z|^2)^{(nu-3)/2}.
cplx sample_theta(double nu, RngStream& rng);

/// B(s, t) on (-1, 1): density proportional to (1-x)^{s-1} (1+x)^{t-1}.
double sample_beta_interval(double s, double t, RngStream& rng);

/// chi_nu for real nu > 0, as sqrt(Gamma(nu/2, scale 2)).
double sample_chi(double nu, RngStream& rng);

/// alpha_k ~ Theta_{beta(n-k-1)+1}, independent.
VerblunskySet sample_circular_beta(std::size_t n, double beta, RngStream& rng);

/// Real coefficients alpha_0..alpha_{2n-2} drawn from the Jacobi-ensemble
/// beta laws (even/odd k), before the Geronimus map.
std::vector<double> sample_jacobi_coefficients(std::size_t n, double beta, double a, double b,
                                               RngStream& rng);
JacobiMatrix sample_jacobi_beta(std::size_t n, double beta, double a, double b, RngStream& rng);

/// Standard Gaussian diagonal, off-diagonal a_k = chi_{beta(n-k)} / sqrt(2).
JacobiMatrix sample_hermite_beta(std::size_t n, double beta, RngStream& rng);

using EnsembleModel = std::variant<VerblunskySet, JacobiMatrix>;

EnsembleModel sample_model(const EnsembleSpec& spec, RngStream& rng);

/// Sorted eigenvalues (angles in (-pi, pi] for CMV models).
std::vector<double> model_eigenvalues(const EnsembleModel& model);

struct SampleBatch {
  std::vector<std::vector<double>> eigenvalues;
  std::vector<EnsembleModel> models;  // empty unless requested
};

/// Draws `count` replicas. Replica i uses stream id i / kReplicasPerStream, so
/// the result does not depend on the thread count.
inline constexpr std::size_t kReplicasPerStream = 1024;
SampleBatch sample_batch(const EnsembleSpec& spec, std::uint64_t seed, std::size_t count,
                         unsigned threads = 1, bool keep_models = false);

/// Unnormalized log density of the family's Coulomb gas (test oracle).
double gibbs_log_density(const EnsembleSpec& spec, std::span<const double> points);

/// sup |F_empirical - F| over sorted samples.
double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov statistic for sorted samples.
double ks_two_sample(std::span<const double> sorted_a, std::span<const double> sorted_b);

}  // namespace cmv
