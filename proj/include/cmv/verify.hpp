#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cmv/core.hpp"
#include "cmv/ensembles.hpp"
#include "cmv/io.hpp"

namespace cmv {

struct IdentityResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t checks = 0;
  bool pass = true;
};

struct VerifyReport {
  std::string suite;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<IdentityResult> identities;

  bool pass() const;
};

json to_json(const VerifyReport& report);

/// brackets, canonical, cotangent, jacobian
const std::vector<std::string>& suite_names();
bool is_known_suite(std::string_view name);

/// Runs `trials` random instances of size n. Throws InvalidArgument for an
/// unknown suite or an n the suite cannot use (cotangent needs n >= 3).
VerifyReport run_suite(std::string_view suite, std::size_t n, std::size_t trials, std::uint64_t seed);

/// Random n-point probability measure with angular gaps >= min_separation
/// and every weight >= min_weight (rejection on the angles, shifted
/// Dirichlet weights).
SpectralMeasureCircle random_measure(std::size_t n, double min_separation, double min_weight,
                                     RngStream& rng);

/// alpha_k uniform in the disk of radius max_modulus, alpha_{n-1} uniform on
/// the circle.
VerblunskySet random_verblunsky(std::size_t n, double max_modulus, RngStream& rng);

}  // namespace cmv
