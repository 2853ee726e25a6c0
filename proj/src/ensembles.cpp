#include "cmv/ensembles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "cmv/opuc.hpp"

namespace cmv {

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::circular: return "circular";
    case Family::jacobi: return "jacobi";
    case Family::hermite: return "hermite";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "circular") return Family::circular;
  if (name == "jacobi") return Family::jacobi;
  if (name == "hermite") return Family::hermite;
  throw Error(ErrorKind::InvalidParams, "unknown ensemble family '" + std::string(name) + "'");
}

void EnsembleSpec::validate() const {
  if (n < 1) throw Error(ErrorKind::InvalidParams, "n must be at least 1");
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::InvalidParams, "beta must be positive");
  }
  if (family == Family::jacobi && !(a > -1.0 && b > -1.0)) {
    throw Error(ErrorKind::InvalidParams, "jacobi parameters need a, b > -1");
  }
}

// ---------------------------------------------------------------------------

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x434d5621u};
  engine_.seed(seq);
}

double RngStream::uniform_open_closed() {
  return 1.0 - std::generate_canonical<double, 53>(engine_);
}

double RngStream::uniform_angle() {
  return 2.0 * std::numbers::pi * std::generate_canonical<double, 53>(engine_);
}

double RngStream::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

double RngStream::gamma(double shape) {
  return std::gamma_distribution<double>(shape, 1.0)(engine_);
}

// ---------------------------------------------------------------------------

cplx sample_theta(double nu, RngStream& rng) {
  if (!(nu >= 1.0) || !std::isfinite(nu)) {
    std::ostringstream os;
    os << "nu = " << nu << " (need nu >= 1)";
    throw Error(ErrorKind::InvalidNu, os.str());
  }
  const double phi = rng.uniform_angle();
  if (nu == 1.0) return std::polar(1.0, phi);
  // 1 - |z|^2 = U^{2/(nu-1)}. Draws that land within the interior margin of
  // the circle are redrawn (only reachable for nu very close to 1).
  for (;;) {
    const double one_minus_s = std::pow(rng.uniform_open_closed(), 2.0 / (nu - 1.0));
    const double r = std::sqrt(1.0 - one_minus_s);
    if (r <= 1.0 - kInteriorMargin) return std::polar(r, phi);
  }
}

double sample_beta_interval(double s, double t, RngStream& rng) {
  if (!(s > 0.0) || !(t > 0.0) || !std::isfinite(s) || !std::isfinite(t)) {
    throw Error(ErrorKind::InvalidParams, "beta parameters must be positive");
  }
  for (;;) {
    const double g1 = rng.gamma(s);
    const double g2 = rng.gamma(t);
    const double sum = g1 + g2;
    if (!(sum > 0.0)) continue;
    const double x = (g2 - g1) / sum;  // 1 - 2 g1 / (g1 + g2)
    if (x > -1.0 && x < 1.0) return x;
  }
}

double sample_chi(double nu, RngStream& rng) {
  if (!(nu > 0.0)) throw Error(ErrorKind::InvalidParams, "chi needs nu > 0");
  return std::sqrt(2.0 * rng.gamma(0.5 * nu));
}

VerblunskySet sample_circular_beta(std::size_t n, double beta, RngStream& rng) {
  EnsembleSpec{Family::circular, n, beta}.validate();
  std::vector<cplx> alpha(n);
  for (std::size_t k = 0; k < n; ++k) {
    alpha[k] = sample_theta(beta * static_cast<double>(n - k - 1) + 1.0, rng);
  }
  return VerblunskySet(std::move(alpha));
}

std::vector<double> sample_jacobi_coefficients(std::size_t n, double beta, double a, double b,
                                               RngStream& rng) {
  EnsembleSpec{Family::jacobi, n, beta, a, b}.validate();
  const double nn = static_cast<double>(n);
  std::vector<double> alpha(2 * n - 1);
  for (std::size_t k = 0; k + 1 < 2 * n; ++k) {
    const double kk = static_cast<double>(k);
    if (k % 2 == 0) {
      const double common = (2.0 * nn - kk - 2.0) / 4.0 * beta;
      alpha[k] = sample_beta_interval(common + a + 1.0, common + b + 1.0, rng);
    } else {
      alpha[k] = sample_beta_interval((2.0 * nn - kk - 3.0) / 4.0 * beta + a + b + 2.0,
                                      (2.0 * nn - kk - 1.0) / 4.0 * beta, rng);
    }
  }
  return alpha;
}

JacobiMatrix sample_jacobi_beta(std::size_t n, double beta, double a, double b, RngStream& rng) {
  return geronimus_interior(sample_jacobi_coefficients(n, beta, a, b, rng));
}

JacobiMatrix sample_hermite_beta(std::size_t n, double beta, RngStream& rng) {
  EnsembleSpec{Family::hermite, n, beta}.validate();
  std::vector<double> diag(n), off;
  for (auto& x : diag) x = rng.normal();
  off.reserve(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    double chi = 0.0;
    while (!(chi > 0.0)) chi = sample_chi(beta * static_cast<double>(n - k), rng);
    off.push_back(chi / std::numbers::sqrt2);
  }
  return JacobiMatrix(std::move(diag), std::move(off));
}

EnsembleModel sample_model(const EnsembleSpec& spec, RngStream& rng) {
  spec.validate();
  switch (spec.family) {
    case Family::circular: return sample_circular_beta(spec.n, spec.beta, rng);
    case Family::jacobi: return sample_jacobi_beta(spec.n, spec.beta, spec.a, spec.b, rng);
    case Family::hermite: return sample_hermite_beta(spec.n, spec.beta, rng);
  }
  throw Error(ErrorKind::InvalidParams, "unknown family");
}

std::vector<double> model_eigenvalues(const EnsembleModel& model) {
  std::vector<double> out;
  if (const auto* v = std::get_if<VerblunskySet>(&model)) {
    Eigen::ComplexEigenSolver<CMatrix> es(build_cmv(*v).entries(), false);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::IllConditioned, "eigensolver did not converge");
    }
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
      out.push_back(wrap_angle(std::arg(es.eigenvalues()(j))));
    }
  } else {
    const auto& J = std::get<JacobiMatrix>(model);
    const auto n = static_cast<Eigen::Index>(J.n());
    if (n == 1) {
      out.push_back(J.b()[0]);
    } else {
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(J.b().data(), n);
      Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(J.a().data(), n - 1);
      Eigen::SelfAdjointEigenSolver<RMatrix> es;
      es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success) {
        throw Error(ErrorKind::IllConditioned, "eigensolver did not converge");
      }
      out.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SampleBatch sample_batch(const EnsembleSpec& spec, std::uint64_t seed, std::size_t count,
                         unsigned threads, bool keep_models) {
  spec.validate();
  SampleBatch batch;
  batch.eigenvalues.resize(count);
  std::vector<std::optional<EnsembleModel>> models(keep_models ? count : 0);

  const std::size_t chunks = (count + kReplicasPerStream - 1) / kReplicasPerStream;
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    try {
      for (std::size_t c = next++; c < chunks; c = next++) {
        RngStream rng(seed, c);
        const std::size_t end = std::min(count, (c + 1) * kReplicasPerStream);
        for (std::size_t i = c * kReplicasPerStream; i < end; ++i) {
          auto model = sample_model(spec, rng);
          batch.eigenvalues[i] = model_eigenvalues(model);
          if (keep_models) models[i] = std::move(model);
        }
      }
    } catch (...) {
      next = chunks;
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  if (keep_models) {
    batch.models.reserve(count);
    for (auto& m : models) batch.models.push_back(std::move(*m));
  }
  return batch;
}

// ---------------------------------------------------------------------------

double gibbs_log_density(const EnsembleSpec& spec, std::span<const double> x) {
  spec.validate();
  if (x.size() != spec.n) {
    throw Error(ErrorKind::DomainViolation, "expected one coordinate per particle");
  }
  for (double p : x) {
    if (!std::isfinite(p)) throw Error(ErrorKind::DomainViolation, "non-finite coordinate");
  }
  double vandermonde = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t k = j + 1; k < x.size(); ++k) {
      const double d = spec.family == Family::circular
                           ? 2.0 * std::sin(0.5 * (x[j] - x[k]))
                           : x[j] - x[k];
      vandermonde += std::log(std::abs(d));
    }
  }
  double potential = 0.0;
  switch (spec.family) {
    case Family::circular:
      break;
    case Family::hermite:
      for (double p : x) potential -= 0.5 * p * p;
      break;
    case Family::jacobi:
      for (double p : x) {
        if (!(p > -2.0 && p < 2.0)) {
          throw Error(ErrorKind::DomainViolation, "jacobi coordinates must lie in (-2, 2)");
        }
        potential += spec.a * std::log(2.0 - p) + spec.b * std::log(2.0 + p);
      }
      break;
  }
  return spec.beta * vandermonde + potential;
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  if (sorted.empty()) throw Error(ErrorKind::EmptySample, "KS statistic needs samples");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  double prev_f = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] < sorted[i - 1]) {
      throw Error(ErrorKind::InvalidArgument, "samples must be sorted ascending");
    }
    const double f = cdf(sorted[i]);
    if (!(f >= 0.0 && f <= 1.0) || f < prev_f) {
      throw Error(ErrorKind::InvalidArgument, "reference cdf is not a monotone map into [0, 1]");
    }
    prev_f = f;
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySample, "KS statistic needs samples");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace cmv
