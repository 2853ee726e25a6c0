#include <doctest.h>

#include <numbers>

#include "cmv/alflows.hpp"
#include "cmv/opuc.hpp"
#include "support.hpp"

using namespace cmv;
using testing::Gen;

namespace {

std::vector<cplx> alphas(const VerblunskySet& v) { return {v.alpha().begin(), v.alpha().end()}; }

std::vector<double> angles(const VerblunskySet& v) {
  const auto mu = unitary_eigensystem(build_cmv(v));
  return {mu.thetas().begin(), mu.thetas().end()};
}

}  // namespace

TEST_CASE("hamiltonian_K") {
  CHECK(std::abs(hamiltonian_K(build_cmv(VerblunskySet({0.0, 0.0, 0.0, 1.0})), 1)) < 1e-15);
  const double psi = 0.3;
  const auto C1 = build_cmv(VerblunskySet({std::polar(1.0, psi)}));
  for (int m = 1; m <= 4; ++m) CHECK(std::abs(hamiltonian_K(C1, m) - std::polar(1.0, -m * psi) / double(m)) < 1e-15);
  CHECK(std::abs(hamiltonian_K(build_cmv(VerblunskySet({0.0, 1.0})), 2) - 1.0) < 1e-15);
  CHECK_THROWS_AS(hamiltonian_K(C1, 0), Error);
}

TEST_CASE("HamiltonianSpec and F") {
  const double t = 0.7;
  CHECK(HamiltonianSpec::hierarchy(1, Part::Re).F(t) == doctest::Approx(-2 * std::sin(t)));
  CHECK(HamiltonianSpec::hierarchy(1, Part::Im).F(t) == doctest::Approx(2 * std::cos(t)));
  CHECK(F_of_theta(HamiltonianSpec::hierarchy(3, Part::Im), t) == doctest::Approx(2 * std::cos(3 * t)));
  CHECK(lax_equivalent_spec(2, Part::Re).F(t) == doctest::Approx(2 * std::sin(2 * t)));
  CHECK_THROWS_AS(HamiltonianSpec({}), Error);
  CHECK_THROWS_AS(HamiltonianSpec({cplx{}, cplx{}}), Error);
  CHECK_THROWS_AS(HamiltonianSpec::hierarchy(0, Part::Re), Error);

  Gen gen(1);
  const auto v = gen.verblunsky(5);
  const CMatrix C = build_cmv(v).entries();
  for (int m = 1; m <= 3; ++m) {
    CHECK(HamiltonianSpec::hierarchy(m, Part::Re).phi(C) == doctest::Approx(hamiltonian_K(C, m).real()));
    CHECK(HamiltonianSpec::hierarchy(m, Part::Im).phi(C) == doctest::Approx(hamiltonian_K(C, m).imag()));
  }
  CHECK(parse_part("im") == Part::Im);
  CHECK_THROWS_AS(parse_part("x"), Error);
}

TEST_CASE("plus projection") {
  CMatrix A(2, 2);
  A << 2.0, 4.0, 6.0, 8.0;
  CMatrix expected(2, 2);
  expected << 1.0, 4.0, 0.0, 4.0;
  CHECK(testing::max_abs(plus_projection(A) - expected) == 0.0);
  CHECK(testing::max_abs(plus_projection(CMatrix::Identity(3, 3)) - 0.5 * CMatrix::Identity(3, 3)) == 0.0);
  CMatrix L = CMatrix::Zero(3, 3);
  L(2, 0) = 1.0;
  L(1, 0) = cplx{0, 2};
  CHECK(testing::max_abs(plus_projection(L)) == 0.0);
}

TEST_CASE("Lax partners are anti-Hermitian") {
  Gen gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto C = build_cmv(gen.verblunsky(gen.index(1, 8)));
    for (int m = 1; m <= 3; ++m)
      for (Part p : {Part::Re, Part::Im}) {
        const CMatrix P = lax_P(C, m, p);
        CHECK(testing::max_abs(P + P.adjoint()) < 1e-13);
      }
  }
  const auto C1 = build_cmv(VerblunskySet({std::polar(1.0, 1.0)}));
  const CMatrix P1 = lax_P(C1, 1, Part::Re);
  CHECK(std::abs(P1(0, 0).real()) < 1e-16);
  CHECK(std::abs((C1.entries() * P1 - P1 * C1.entries())(0, 0)) == 0.0);
}

TEST_CASE("n = 2, alpha = (0, 1): the Re K_1 partner commutes with C") {
  const VerblunskySet v({0.0, 1.0});
  const CMatrix C = build_cmv(v).entries();
  const CMatrix P = lax_P(C, 1, Part::Re);
  CMatrix expected(2, 2);
  expected << 0.0, cplx(0, 1), cplx(0, 1), 0.0;
  CHECK(testing::max_abs(P - expected) < 1e-16);
  CHECK(testing::max_abs(C * P - P * C) < 1e-16);
  // Closed form with alpha_{-1} = -1: i rho^2 (alpha_{-1} + alpha_1) = 0.
  CHECK(std::abs(al_closed_form_field(v)[0]) < 1e-16);
  CHECK(std::abs(al_vector_field(v, 1, Part::Re)[0]) < 1e-16);
  // The other unimodular choice does not match the Lax flow here.
  CHECK(std::abs(al_closed_form_field(v, 1.0)[0] - cplx(0, 2)) < 1e-16);
}

TEST_CASE("extracted field matches the closed Ablowitz-Ladik form") {
  Gen gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = gen.verblunsky(gen.index(1, 10));
    const auto extracted = al_vector_field(v, 1, Part::Re);
    const auto closed = al_closed_form_field(v);
    CHECK(testing::max_abs_diff(extracted, closed) <= 1e-12);
    CHECK(extracted.back() == cplx{});
  }
  CHECK_THROWS_AS(al_closed_form_field(VerblunskySet({0.1, 1.0}), 0.5), Error);
}

TEST_CASE("extraction inverts the entry chain") {
  // dC/dt built from a known alpha-dot via the derivative of the pattern.
  Gen gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = gen.verblunsky(gen.index(2, 9));
    std::vector<cplx> dir(v.n(), cplx{});
    for (std::size_t k = 0; k + 1 < v.n(); ++k) dir[k] = gen.disk(1.0);
    const double h = 1e-6;
    auto moved = [&](double s) {
      auto a = alphas(v);
      for (std::size_t k = 0; k < a.size(); ++k) a[k] += s * dir[k];
      return testing::cmv_pattern(VerblunskySet(a));
    };
    const CMatrix Cdot = (moved(h) - moved(-h)) / (2 * h);
    CHECK(testing::max_abs_diff(extract_alpha_dot(v, Cdot), dir) < 1e-7);
  }
}

TEST_CASE("RhoTooSmall guard") {
  // An oversized step throws the state out of the disk.
  const VerblunskySet v({cplx{0.999999, 0.0}, cplx{0.0, 1.0}});
  try {
    integrate_flow(v, 3, Part::Re, 100.0, 100.0);
    FAIL("expected RhoTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RhoTooSmall);
  }
}

TEST_CASE("Lax equation: finite-difference dC/dt equals [C, P]") {
  Gen gen(5);
  for (int m = 1; m <= 3; ++m)
    for (Part p : {Part::Re, Part::Im}) {
      const auto v = gen.verblunsky(6, 0.8);
      const CMatrix C = build_cmv(v).entries();
      const CMatrix P = lax_P(C, m, p);
      const CMatrix lax = C * P - P * C;
      auto diff = [&](double h) {
        const auto fwd = integrate_flow(v, m, p, h, h, {1, false}).final_state();
        const auto bwd = integrate_flow(v, -lax_equivalent_spec(m, p), h, h, {1, false}).final_state();
        return CMatrix((build_cmv(fwd).entries() - build_cmv(bwd).entries()) / (2 * h));
      };
      const CMatrix rich = (4.0 * diff(5e-4) - diff(1e-3)) / 3.0;
      CHECK(testing::max_abs(rich - lax) / testing::max_abs(lax) <= 1e-6);
    }
}

TEST_CASE("flow invariants") {
  Gen gen(6);
  const auto v = gen.verblunsky(6, 0.7);
  const auto traj = integrate_flow(v, 1, Part::Re, 1.0, 1e-3, {100, true});
  CHECK(traj.times.size() == 11);
  CHECK(traj.times.back() == doctest::Approx(1.0));
  CHECK(traj.max_eigenvalue_drift() <= 1e-10);
  const cplx det0 = build_cmv(v).entries().determinant();
  for (const auto& s : traj.states) {
    CHECK(s.last() == v.last());
    CHECK(std::abs(build_cmv(s).entries().determinant() - det0) <= 1e-10);
  }
  for (const auto& d : traj.diagnostics) CHECK(d.unitarity_residual < 1e-13);

  const auto zero = integrate_flow(v, 2, Part::Im, 0.0, 1e-3);
  CHECK(zero.states.size() == 1);
  CHECK(zero.final_state() == v);

  const VerblunskySet single({std::polar(1.0, 2.0)});
  CHECK(integrate_flow(single, 1, Part::Re, 0.5, 0.1).final_state() == single);

  CHECK_THROWS_AS(integrate_flow(v, 1, Part::Re, 1.0, 0.0), Error);
  CHECK_THROWS_AS(integrate_flow(v, 1, Part::Re, -1.0, 0.1), Error);
}

TEST_CASE("RK4 agrees with exact spectral propagation") {
  Gen gen(7);
  for (int m = 1; m <= 2; ++m)
    for (Part p : {Part::Re, Part::Im}) {
      const auto v = gen.verblunsky(5, 0.6);
      const auto rk = integrate_flow(v, m, p, 1.0, 1e-3, {1000, false}).final_state();
      const auto ex = flow_via_spectral(v, lax_equivalent_spec(m, p), 1.0);
      CHECK(testing::max_abs_diff(alphas(rk), alphas(ex)) <= 1e-8);
      CHECK(std::abs(ex.last() - v.last()) <= 1e-8);
    }
}

TEST_CASE("spectral path") {
  Gen gen(8);
  const auto v = gen.verblunsky(5, 0.8);
  const HamiltonianSpec spec({cplx{0.2, 0.5}, cplx{-0.3, 0.1}});
  CHECK(testing::max_abs_diff(alphas(flow_via_spectral(v, spec, 0.0)), alphas(v)) <= 1e-8);
  const auto a0 = angles(v);
  const auto a1 = angles(flow_via_spectral(v, spec, 3.0));
  for (std::size_t j = 0; j < a0.size(); ++j) CHECK(std::abs(a0[j] - a1[j]) < 1e-10);

  const auto mu = unitary_eigensystem(build_cmv(v));
  CHECK(exact_propagate(mu, spec, 0.0).weights()[2] == doctest::Approx(mu.weights()[2]));
  // d/dt log mu_j at 0 equals F_j - sum F mu.
  const double h = 1e-5;
  double mean = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) mean += spec.F(mu.thetas()[j]) * mu.weights()[j];
  const auto up = exact_propagate(mu, spec, h), down = exact_propagate(mu, spec, -h);
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const double d = (std::log(up.weights()[j]) - std::log(down.weights()[j])) / (2 * h);
    CHECK(d == doctest::Approx(spec.F(mu.thetas()[j]) - mean).epsilon(1e-7));
  }
  // F constant on the support leaves the measure alone: F = 2cos(2 theta)
  // takes one value on {+-pi/4, +-3pi/4}.
  const double q = std::numbers::pi / 4;
  const SpectralMeasureCircle four({q, 3 * q, -q, -3 * q}, {0.1, 0.2, 0.3, 0.4});
  const auto same = exact_propagate(four, HamiltonianSpec({0.0, 0.5}), 7.0);
  for (std::size_t j = 0; j < 4; ++j) CHECK(same.weights()[j] == doctest::Approx(four.weights()[j]).epsilon(1e-12));

  const auto traj = spectral_trajectory(v, spec, 1.0, 0.25);
  CHECK(traj.states.size() == 5);
  CHECK(traj.max_eigenvalue_drift() < 1e-10);
}

TEST_CASE("hierarchy flows commute") {
  Gen gen(9);
  const auto v = gen.verblunsky(5, 0.6);
  const double s = 0.1, dt = 1e-3;
  const auto ab = integrate_flow(integrate_flow(v, 1, Part::Re, s, dt).final_state(), 2, Part::Re, s, dt);
  const auto ba = integrate_flow(integrate_flow(v, 2, Part::Re, s, dt).final_state(), 1, Part::Re, s, dt);
  CHECK(testing::max_abs_diff(alphas(ab.final_state()), alphas(ba.final_state())) <= 1e-6);
}

TEST_CASE("Im flows preserve reality") {
  Gen gen(10);
  for (int m = 1; m <= 3; ++m) {
    std::vector<cplx> a(6);
    for (std::size_t k = 0; k < 5; ++k) a[k] = gen.uniform(-0.8, 0.8);
    a[5] = m % 2 ? 1.0 : -1.0;
    const auto traj = integrate_flow(VerblunskySet(a), m, Part::Im, 1.0, 1e-3, {50, false});
    double worst = 0.0;
    for (const auto& s : traj.states)
      for (cplx z : s.alpha()) worst = std::max(worst, std::abs(z.imag()));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("Schur flow") {
  const std::vector<double> zeros(4, 0.0);
  const auto f = schur_vector_field(zeros, -1.0, 1.0);
  CHECK(f[0] == 0.0 - (-1.0));
  CHECK(f[1] == 0.0);
  CHECK(f[3] == 1.0);
  const std::vector<double> flat(3, 0.4);
  for (double x : schur_vector_field(flat, 0.4, 0.4)) CHECK(x == 0.0);
  const std::vector<double> bad{0.2, 1.0};
  CHECK_THROWS_AS(schur_vector_field(bad, -1.0, 1.0), Error);

  Gen gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = gen.index(2, 8);
    std::vector<cplx> a(n);
    std::vector<double> interior;
    for (std::size_t k = 0; k + 1 < n; ++k) interior.push_back((a[k] = gen.uniform(-0.9, 0.9)).real());
    const double last = gen.uniform(0, 1) < 0.5 ? -1.0 : 1.0;
    a[n - 1] = last;
    const auto schur = schur_vector_field(interior, -1.0, last);
    const auto al = al_vector_field(VerblunskySet(a), HamiltonianSpec::hierarchy(1, Part::Im));
    for (std::size_t k = 0; k + 1 < n; ++k) CHECK(std::abs(al[k] - schur[k]) < 1e-12);
  }
}

TEST_CASE("Toda flow") {
  const auto f = toda_vector_field(JacobiMatrix({0.0, 0.0}, {1.0}));
  CHECK(f.diag[0] == doctest::Approx(-2.0));
  CHECK(f.diag[1] == doctest::Approx(2.0));
  CHECK(f.off[0] == doctest::Approx(0.0));

  // Diagonal limit: vanishing off-diagonal gives a vanishing field.
  const auto g = toda_vector_field(JacobiMatrix({1.0, 2.0, 3.0}, {1e-300, 1e-300}));
  for (double x : g.diag) CHECK(std::abs(x) < 1e-290);

  const JacobiMatrix J({0.3, -0.2, 0.5, 0.1}, {0.7, 0.4, 0.9});
  const auto before = jacobi_eigensystem(J);
  const auto after = jacobi_eigensystem(integrate_toda(J, 1.0, 1e-3));
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(before.points()[j] - after.points()[j]) <= 1e-10);
}

TEST_CASE("gauge transform and the ALE1 form") {
  Gen gen(12);
  const auto v = gen.verblunsky(5, 0.6);
  const auto traj = integrate_flow(v, 1, Part::Re, 1.0, 1e-3);
  const auto g = gauge_transform(traj);
  CHECK(testing::max_abs_diff(g.beta.front(), alphas(v)) == 0.0);
  const std::size_t n = v.n();
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < g.times.size(); i += 37) {
    const double h = g.times[i + 1] - g.times[i];
    const double t = g.times[i];
    const cplx before = -std::polar(1.0, -2.0 * t);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      CHECK(std::abs(std::abs(g.beta[i][k]) - std::abs(traj.states[i].alpha(k))) < 1e-15);
      const auto& b = g.beta;
      const cplx dbeta = (b[i - 2][k] - 8.0 * b[i - 1][k] + 8.0 * b[i + 1][k] - b[i + 2][k]) / (12 * h);
      const double r2 = 1.0 - std::norm(g.beta[i][k]);
      const cplx prev = k == 0 ? before : g.beta[i][k - 1];
      const cplx resid = cplx(0, -1) * dbeta - (r2 * (g.beta[i][k + 1] + prev) - 2.0 * g.beta[i][k]);
      worst = std::max(worst, std::abs(resid));
    }
  }
  CHECK(worst <= 1e-6);
}
