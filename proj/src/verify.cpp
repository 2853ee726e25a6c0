#include "cmv/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cmv/alflows.hpp"
#include "cmv/brackets.hpp"
#include "cmv/opuc.hpp"

namespace cmv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Tally {
 public:
  void declare(const std::string& name, double tolerance) {
    if (!find(name)) results_.push_back({name, 0.0, tolerance, 0, true});
  }
  void add(const std::string& name, double residual, double tolerance) {
    declare(name, tolerance);
    IdentityResult& r = *find(name);
    ++r.checks;
    if (!(std::abs(residual) <= r.max_residual)) r.max_residual = std::abs(residual);
    if (!(std::abs(residual) <= r.tolerance)) r.pass = false;
  }
  std::vector<IdentityResult> take() { return std::move(results_); }

 private:
  IdentityResult* find(const std::string& name) {
    for (auto& r : results_)
      if (r.name == name) return &r;
    return nullptr;
  }
  std::vector<IdentityResult> results_;
};

double separation_for(std::size_t n, double preferred) {
  return std::min(preferred, 0.6 * kTwoPi / double(n));
}

VerblunskySet probe(std::size_t n, RngStream& rng) {
  return verblunsky_from_measure(random_measure(n, separation_for(n, 0.3), 0.2 / double(n), rng));
}

double chain_rule(const Gradient& g, const std::vector<cplx>& field) {
  double acc = 0.0;
  for (std::size_t j = 0; j < g.du.size(); ++j) acc += g.du[j] * field[j].real() + g.dv[j] * field[j].imag();
  return acc;
}

void brackets_trial(Tally& tally, std::size_t n, RngStream& rng) {
  const VerblunskySet v = probe(n, rng);
  const std::size_t m = n - 1;
  const cplx i{0.0, 1.0};

  std::vector<Gradient> re_k, im_k;
  for (int p = 1; p <= 3; ++p) {
    const auto h = hamiltonian_observables(p);
    re_k.push_back(gradient(h.re, v));
    im_k.push_back(gradient(h.im, v));
  }

  tally.declare("complex_coordinate_brackets", 1e-6);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l) {
      const auto cb = verblunsky_brackets(v, k, l);
      const cplx expected = k == l ? -2.0 * i * (1.0 - std::norm(v.alpha(k))) : cplx{};
      tally.add("complex_coordinate_brackets",
                std::max(std::abs(cb.alpha_alphabar - expected), std::abs(cb.alpha_alpha)), 1e-6);
    }

  tally.declare("eigenvalue_angles_commute", 1e-6);
  if (n >= 2) {
    const SpectralObservables so(v);
    std::vector<Gradient> th;
    for (std::size_t j = 0; j < n; ++j) th.push_back(gradient(so.theta(j), v));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        tally.add("eigenvalue_angles_commute", al_bracket(th[j], th[k], v).value, 1e-6);
  }

  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) {
      tally.add("hierarchy_re_re", al_bracket(re_k[p], re_k[q], v).value, 1e-6);
      tally.add("hierarchy_im_re", al_bracket(im_k[p], re_k[q], v).value, 1e-6);
      tally.add("hierarchy_im_im", al_bracket(im_k[p], im_k[q], v).value, 1e-6);
    }

  tally.add("antisymmetry",
            al_bracket(re_k[0], im_k[1], v).value + al_bracket(im_k[1], re_k[0], v).value, 1e-10);

  tally.declare("leibniz", 1e-5);
  if (m >= 1) {
    const Observable f = coordinate_u(0), g = hamiltonian_observables(2).re, h = hamiltonian_observables(1).im;
    const double lhs = al_bracket(product(f, g), h, v).value;
    const double rhs = f(v) * al_bracket(g, h, v).value + g(v) * al_bracket(f, h, v).value;
    tally.add("leibniz", lhs - rhs, 1e-5);
  }

  const auto closed = al_closed_form_field(v);
  tally.declare("re_k1_bracket_field", 1e-6);
  for (std::size_t j = 0; j < m; ++j) {
    const cplx br = al_bracket(gradient(coordinate_u(j), v), re_k[0], v).value +
                    i * al_bracket(gradient(coordinate_v(j), v), re_k[0], v).value;
    tally.add("re_k1_bracket_field", std::abs(br - closed[j]), 1e-6);
  }

  const Observable test{"test", [](const VerblunskySet& w) {
                          double acc = hamiltonian_K(build_cmv(w), 2).real();
                          for (std::size_t j = 0; j + 1 < w.n(); ++j)
                            acc += double(j + 1) * (w.alpha(j).real() + 0.5 * w.alpha(j).imag() * w.alpha(j).imag());
                          return acc;
                        }};
  const Gradient gt = gradient(test, v);
  for (int p = 1; p <= 3; ++p) {
    const double br = al_bracket(gt, re_k[std::size_t(p - 1)], v).value;
    tally.add("bracket_flow_consistency", br - chain_rule(gt, al_vector_field(v, p, Part::Re)), 1e-6);
  }
}

void canonical_trial(Tally& tally, std::size_t n, RngStream& rng) {
  const VerblunskySet v = probe(n, rng);
  const SpectralObservables so(v);
  const auto th = so.base_measure().thetas();
  const auto mu = so.base_measure().weights();

  std::vector<Gradient> theta, half_log;
  for (std::size_t j = 0; j < n; ++j) theta.push_back(gradient(so.theta(j), v));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    Gradient g = gradient(so.log_mass_ratio(j, n - 1), v);
    for (auto* part : {&g.du, &g.dv, &g.du_fine, &g.dv_fine})
      for (double& x : *part) x *= 0.5;
    half_log.push_back(std::move(g));
  }
  for (std::size_t l = 0; l + 1 < n; ++l)
    for (std::size_t j = 0; j + 1 < n; ++j)
      tally.add("canonical_pairs", al_bracket(theta[l], half_log[j], v).value - (l == j ? 1.0 : 0.0), 1e-5);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k)
      tally.add("eigenvalue_angles_commute", al_bracket(theta[j], theta[k], v).value, 1e-6);

  // Mass law: {phi, log mu_j} = F(z_j) - sum_l F(z_l) mu_l.
  std::vector<cplx> c;
  for (int p = 0; p < 3; ++p) c.emplace_back(rng.normal(), rng.normal());
  const HamiltonianSpec spec(c);
  const Observable phi{"phi", [spec](const VerblunskySet& w) { return spec.phi(build_cmv(w).entries()); }};
  const Gradient gphi = gradient(phi, v);
  double mean_F = 0.0;
  for (std::size_t l = 0; l < n; ++l) mean_F += spec.F(th[l]) * mu[l];
  for (std::size_t j = 0; j < n; ++j) {
    const Observable log_mu{"log mu", [so, j](const VerblunskySet& w) { return std::log(so.evaluate(w).mu[j]); }};
    const double br = al_bracket(gphi, gradient(log_mu, v), v).value;
    tally.add("mass_evolution_law", br - (spec.F(th[j]) - mean_F), 1e-5);
  }
  tally.add("total_mass_casimir", al_bracket(gphi, gradient(so.total_mass(), v), v).value, 1e-6);
}

void cotangent_trial(Tally& tally, std::size_t n, RngStream& rng) {
  const VerblunskySet v =
      verblunsky_from_measure(random_measure(n, separation_for(n, 0.5), 0.3 / double(n), rng));
  const double base = cotangent_residual(v, {0, 1, 2});
  tally.add("cotangent_identity", base, 1e-5);
  std::array<std::size_t, 3> perm{0, 1, 2};
  while (std::next_permutation(perm.begin(), perm.end()))
    tally.add("cotangent_relabel_invariance", cotangent_residual(v, perm) - base, 1e-6);
  tally.declare("cotangent_any_triple", 1e-5);
  if (n >= 4) {
    std::vector<std::size_t> labels(n);
    for (std::size_t j = 0; j < n; ++j) labels[j] = j;
    std::shuffle(labels.begin(), labels.end(), rng.engine());
    tally.add("cotangent_any_triple", cotangent_residual(v, {labels[0], labels[1], labels[2]}), 1e-5);
  }
}

void jacobian_trial(Tally& tally, std::size_t n, RngStream& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const auto mu = random_measure(n, separation_for(n, 0.3), 0.2 / double(n), rng);
    const double phi = std::arg(verblunsky_from_measure(mu).last());
    if (std::numbers::pi - std::abs(phi) < 0.2) continue;
    const double numeric = spectral_to_verblunsky_jacobian(mu);
    const double formula = jacobian_formula(mu);
    if (n == 1)
      tally.add("jacobian_formula", numeric - formula, 1e-12);
    else
      tally.add("jacobian_formula", (numeric - formula) / formula, 1e-6);
    return;
  }
  throw Error(ErrorKind::IllConditioned, "could not draw a measure away from the branch cut");
}

}  // namespace

bool VerifyReport::pass() const {
  return std::all_of(identities.begin(), identities.end(), [](const auto& r) { return r.pass; });
}

json to_json(const VerifyReport& report) {
  json ids = json::array();
  for (const auto& r : report.identities)
    ids.push_back({{"name", r.name},
                   {"max_residual", r.max_residual},
                   {"tolerance", r.tolerance},
                   {"checks", r.checks},
                   {"pass", r.pass}});
  return {{"suite", report.suite}, {"n", report.n},       {"trials", report.trials},
          {"seed", report.seed},   {"pass", report.pass()}, {"identities", std::move(ids)}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"brackets", "canonical", "cotangent", "jacobian"};
  return names;
}

bool is_known_suite(std::string_view name) {
  const auto& s = suite_names();
  return std::find(s.begin(), s.end(), name) != s.end();
}

VerifyReport run_suite(std::string_view suite, std::size_t n, std::size_t trials, std::uint64_t seed) {
  if (!is_known_suite(suite)) throw Error(ErrorKind::InvalidArgument, "unknown suite '" + std::string(suite) + "'");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (suite == "canonical" && n < 2) throw Error(ErrorKind::InvalidArgument, "canonical suite needs n >= 2");
  if (suite == "cotangent" && n < 3) throw Error(ErrorKind::InvalidArgument, "cotangent suite needs n >= 3");

  Tally tally;
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream rng(seed, t);
    if (suite == "brackets")
      brackets_trial(tally, n, rng);
    else if (suite == "canonical")
      canonical_trial(tally, n, rng);
    else if (suite == "cotangent")
      cotangent_trial(tally, n, rng);
    else
      jacobian_trial(tally, n, rng);
  }
  return {std::string(suite), n, trials, seed, tally.take()};
}

SpectralMeasureCircle random_measure(std::size_t n, double min_separation, double min_weight,
                                     RngStream& rng) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (!(double(n) * min_separation < kTwoPi) || !(double(n) * min_weight < 1.0))
    throw Error(ErrorKind::InvalidArgument, "separation or weight floor too large for n points");
  std::vector<double> th(n);
  for (int attempt = 0;; ++attempt) {
    if (attempt == 100000) throw Error(ErrorKind::InvalidArgument, "could not place separated points");
    for (auto& t : th) t = wrap_angle(rng.uniform_angle());
    std::sort(th.begin(), th.end());
    double gap = n == 1 ? kTwoPi : th.front() + kTwoPi - th.back();
    for (std::size_t j = 1; j < n; ++j) gap = std::min(gap, th[j] - th[j - 1]);
    if (gap >= min_separation) break;
  }
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) sum += (x = rng.gamma(1.0));
  const double free = 1.0 - double(n) * min_weight;
  for (auto& x : w) x = min_weight + free * x / sum;
  return SpectralMeasureCircle::normalized(std::move(th), std::move(w));
}

VerblunskySet random_verblunsky(std::size_t n, double max_modulus, RngStream& rng) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (!(max_modulus >= 0.0 && max_modulus < 1.0))
    throw Error(ErrorKind::InvalidArgument, "max_modulus must lie in [0, 1)");
  std::vector<cplx> a(n);
  for (std::size_t k = 0; k + 1 < n; ++k)
    a[k] = std::polar(max_modulus * std::sqrt(rng.uniform_open_closed()), rng.uniform_angle());
  a[n - 1] = std::polar(1.0, rng.uniform_angle());
  return VerblunskySet(std::move(a));
}

}  // namespace cmv
