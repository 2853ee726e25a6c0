#include "cmv/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace cmv {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidVerblunsky: return "InvalidVerblunsky";
    case ErrorKind::InvalidMeasure: return "InvalidMeasure";
    case ErrorKind::NonPositiveOffDiagonal: return "NonPositiveOffDiagonal";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::SupportTooSmall: return "SupportTooSmall";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::InvalidBoundary: return "InvalidBoundary";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::SupportAtRealAxis: return "SupportAtRealAxis";
    case ErrorKind::InvalidNu: return "InvalidNu";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::RhoTooSmall: return "RhoTooSmall";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NonDistinctLambda: return "NonDistinctLambda";
    case ErrorKind::NonDifferentiable: return "NonDifferentiable";
    case ErrorKind::MatchingAmbiguous: return "MatchingAmbiguous";
    case ErrorKind::BranchProximity: return "BranchProximity";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

bool is_domain_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateSpectrum:
    case ErrorKind::IllConditioned:
    case ErrorKind::RhoTooSmall:
    case ErrorKind::NonDistinctLambda:
    case ErrorKind::NonDifferentiable:
    case ErrorKind::MatchingAmbiguous:
    case ErrorKind::BranchProximity:
    case ErrorKind::SupportAtRealAxis:
    case ErrorKind::NotSymmetric:
    case ErrorKind::DomainViolation:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------

VerblunskySet::VerblunskySet(std::vector<cplx> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) {
    throw Error(ErrorKind::InvalidVerblunsky, "at least one coefficient is required");
  }
  const std::size_t n = alpha_.size();
  rho_.reserve(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double mod = std::abs(alpha_[k]);
    if (!std::isfinite(mod) || mod > 1.0 - kInteriorMargin) {
      std::ostringstream os;
      os << "|alpha_" << k << "| = " << mod << " is not strictly inside the unit disk";
      throw Error(ErrorKind::InvalidVerblunsky, os.str());
    }
    rho_.push_back(std::sqrt((1.0 - mod) * (1.0 + mod)));
  }
  const double last = std::abs(alpha_.back());
  if (!std::isfinite(last) || std::abs(last - 1.0) > kBoundaryTolerance) {
    std::ostringstream os;
    os << "|alpha_" << n - 1 << "| = " << last << " is not on the unit circle";
    throw Error(ErrorKind::InvalidVerblunsky, os.str());
  }
  alpha_.back() /= last;
}

double VerblunskySet::rho(std::size_t k) const {
  if (k + 1 == alpha_.size()) return 0.0;
  return rho_.at(k);
}

Eigen::Matrix2cd build_xi(cplx alpha) {
  const double mod = std::abs(alpha);
  const double r = mod >= 1.0 ? 0.0 : std::sqrt((1.0 - mod) * (1.0 + mod));
  Eigen::Matrix2cd xi;
  xi << std::conj(alpha), r, r, -alpha;
  return xi;
}

namespace {

// Block Xi_k occupies rows/cols k, k+1 (a 1x1 block at k for k = -1, n-1).
// Even k belong to L, odd k to M.
void place_blocks(const VerblunskySet& v, CMatrix& L, CMatrix& M) {
  const auto n = static_cast<Eigen::Index>(v.n());
  L = CMatrix::Zero(n, n);
  M = CMatrix::Zero(n, n);
  M(0, 0) = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    CMatrix& target = (k % 2 == 0) ? L : M;
    const cplx a = v.alpha(static_cast<std::size_t>(k));
    if (k + 1 < n) {
      target.block<2, 2>(k, k) = build_xi(a);
    } else {
      target(k, k) = std::conj(a);
    }
  }
}

}  // namespace

LMFactors build_LM(const VerblunskySet& v) {
  LMFactors f;
  place_blocks(v, f.L, f.M);
  return f;
}

CMVMatrix::CMVMatrix(VerblunskySet source) : source_(std::move(source)) {
  CMatrix L, M;
  place_blocks(source_, L, M);
  const auto n = static_cast<Eigen::Index>(source_.n());
  entries_ = CMatrix::Zero(n, n);
  // Row r of L has nonzeros only inside its own block, so each entry of LM is
  // a single product; summing over the block keeps out-of-band zeros exact.
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::Index first = (r % 2 == 0) ? r : r - 1;
    const Eigen::Index last = std::min(first + 1, n - 1);
    for (Eigen::Index c = std::max<Eigen::Index>(0, r - 2); c <= std::min(n - 1, r + 2); ++c) {
      cplx acc = 0.0;
      for (Eigen::Index k = first; k <= last; ++k) {
        if (L(r, k) != 0.0 && M(k, c) != 0.0) acc += L(r, k) * M(k, c);
      }
      entries_(r, c) = acc;
    }
  }
}

CMVMatrix build_cmv(const VerblunskySet& v) { return CMVMatrix(v); }

cplx cmv_trace_identity(const VerblunskySet& v) {
  cplx t = std::conj(v.alpha(0));
  for (std::size_t k = 1; k < v.n(); ++k) t -= v.alpha(k - 1) * std::conj(v.alpha(k));
  return t;
}

cplx cmv_determinant_identity(const VerblunskySet& v) {
  const double sign = (v.n() % 2 == 1) ? 1.0 : -1.0;
  return sign * std::conj(v.last());
}

// ---------------------------------------------------------------------------

JacobiMatrix::JacobiMatrix(std::vector<double> b, std::vector<double> a)
    : b_(std::move(b)), a_(std::move(a)) {
  if (b_.empty()) throw Error(ErrorKind::InvalidArgument, "Jacobi matrix needs n >= 1");
  if (a_.size() + 1 != b_.size()) {
    throw Error(ErrorKind::InvalidArgument, "off-diagonal length must be n-1");
  }
  for (std::size_t k = 0; k < a_.size(); ++k) {
    if (!(a_[k] > 0.0) || !std::isfinite(a_[k])) {
      std::ostringstream os;
      os << "a_" << k + 1 << " = " << a_[k];
      throw Error(ErrorKind::NonPositiveOffDiagonal, os.str());
    }
  }
  for (double x : b_) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite diagonal entry");
  }
}

RMatrix JacobiMatrix::dense() const {
  const auto n = static_cast<Eigen::Index>(b_.size());
  RMatrix J = RMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) J(k, k) = b_[static_cast<std::size_t>(k)];
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    J(k, k + 1) = J(k + 1, k) = a_[static_cast<std::size_t>(k)];
  }
  return J;
}

JacobiMatrix build_jacobi(std::vector<double> b, std::vector<double> a) {
  return JacobiMatrix(std::move(b), std::move(a));
}

// ---------------------------------------------------------------------------

double wrap_angle(double theta) noexcept {
  constexpr double pi = std::numbers::pi;
  double w = std::remainder(theta, 2.0 * pi);  // [-pi, pi]
  if (w <= -pi) w += 2.0 * pi;
  return w;
}

namespace {

template <typename Less>
void sort_pairs(std::vector<double>& x, std::vector<double>& w, Less less) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    if (x[i] != x[j]) return less(x[i], x[j]);
    return w[i] > w[j];
  });
  std::vector<double> xs, ws;
  xs.reserve(x.size());
  ws.reserve(x.size());
  for (auto i : idx) {
    xs.push_back(x[i]);
    ws.push_back(w[i]);
  }
  x = std::move(xs);
  w = std::move(ws);
}

double check_weights(const std::vector<double>& w, std::size_t points) {
  if (points == 0) throw Error(ErrorKind::InvalidMeasure, "measure has no support points");
  if (w.size() != points) throw Error(ErrorKind::InvalidMeasure, "points/weights length mismatch");
  double sum = 0.0;
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorKind::InvalidMeasure, "weights must be positive and finite");
    }
    sum += x;
  }
  return sum;
}

}  // namespace

SpectralMeasureCircle::SpectralMeasureCircle(std::vector<double> thetas,
                                             std::vector<double> weights)
    : theta_(std::move(thetas)), weight_(std::move(weights)) {
  check_and_sort(1e-12);
}

SpectralMeasureCircle SpectralMeasureCircle::normalized(std::vector<double> thetas,
                                                        std::vector<double> weights) {
  SpectralMeasureCircle m;
  m.theta_ = std::move(thetas);
  m.weight_ = std::move(weights);
  const double sum = check_weights(m.weight_, m.theta_.size());
  for (double& x : m.weight_) x /= sum;
  m.check_and_sort(1e-12);
  return m;
}

void SpectralMeasureCircle::check_and_sort(double sum_tolerance) {
  const double sum = check_weights(weight_, theta_.size());
  if (std::abs(sum - 1.0) > sum_tolerance) {
    std::ostringstream os;
    os << "weights sum to " << sum;
    throw Error(ErrorKind::InvalidMeasure, os.str());
  }
  for (double& t : theta_) {
    if (!std::isfinite(t)) throw Error(ErrorKind::InvalidMeasure, "non-finite angle");
    t = wrap_angle(t);
  }
  sort_pairs(theta_, weight_, std::less<>{});
  const std::size_t n = theta_.size();
  if (n < 2) return;
  // Circular separation, including the wrap from the last point to the first.
  for (std::size_t j = 0; j < n; ++j) {
    const double next = (j + 1 < n) ? theta_[j + 1] : theta_[0] + 2.0 * std::numbers::pi;
    if (next - theta_[j] <= 1e-10) {
      throw Error(ErrorKind::InvalidMeasure, "support points are not distinct");
    }
  }
}

SpectralMeasureLine::SpectralMeasureLine(std::vector<double> points,
                                         std::vector<double> weights)
    : x_(std::move(points)), weight_(std::move(weights)) {
  check_and_sort(1e-12);
}

SpectralMeasureLine SpectralMeasureLine::normalized(std::vector<double> points,
                                                    std::vector<double> weights) {
  SpectralMeasureLine m;
  m.x_ = std::move(points);
  m.weight_ = std::move(weights);
  const double sum = check_weights(m.weight_, m.x_.size());
  for (double& x : m.weight_) x /= sum;
  m.check_and_sort(1e-12);
  return m;
}

void SpectralMeasureLine::check_and_sort(double sum_tolerance) {
  const double sum = check_weights(weight_, x_.size());
  if (std::abs(sum - 1.0) > sum_tolerance) {
    std::ostringstream os;
    os << "weights sum to " << sum;
    throw Error(ErrorKind::InvalidMeasure, os.str());
  }
  for (double x : x_) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidMeasure, "non-finite point");
  }
  sort_pairs(x_, weight_, std::less<>{});
  for (std::size_t j = 0; j + 1 < x_.size(); ++j) {
    if (x_[j + 1] - x_[j] <= 1e-10) {
      throw Error(ErrorKind::InvalidMeasure, "support points are not distinct");
    }
  }
}

}  // namespace cmv
