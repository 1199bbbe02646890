#include <doctest.h>

#include <random>

#include "wigner/carrier.hpp"
#include "wigner/moyal.hpp"
#include "wigner/schrodinger.hpp"
#include "wigner/wigner_transform.hpp"

using namespace wigner;

namespace {

// Fourth-order central difference for d^3/dp^3 along each q row (interior only).
PhaseField fd_third_p(const PhaseField& f) {
  const GridSpec& g = f.grid;
  PhaseField out(g);
  const double h3 = 8.0 * g.dp * g.dp * g.dp;
  for (int i = 0; i < g.n_q; ++i) {
    for (int j = 3; j < g.n_p - 3; ++j) {
      out(i, j) = (f(i, j - 3) - 8 * f(i, j - 2) + 13 * f(i, j - 1) - 13 * f(i, j + 1) +
                   8 * f(i, j + 2) - f(i, j + 3)) / h3;
    }
  }
  return out;
}

PhaseField test_field(const GridSpec& g) {
  return PhaseField::sample(g, [](double q, double p) {
    return std::exp(-0.5 * q * q - 0.5 * (p - 0.3) * (p - 0.3)) * (1.0 + 0.4 * q * p - 0.2 * p * p);
  });
}

PhaseField random_field(std::mt19937_64& rng, const GridSpec& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::bernoulli_distribution zero(0.1);
  PhaseField f(g);
  for (int i = 0; i < g.n_q; ++i)
    for (int j = 0; j < g.n_p; ++j) f(i, j) = zero(rng) ? 0.0 : n(rng);
  return f;
}

}  // namespace

TEST_CASE("quartic residual matches the finite-difference oracle") {
  const GridSpec g = make_phase_grid(64, 0.25, 512, 0.04);
  const double lambda = 0.05;
  const PhaseField w = test_field(g);
  const PhaseField q = moyal_residual(w, Potential::quartic(lambda));
  const PhaseField d3 = fd_third_p(w);
  double err = 0.0, scale = 0.0;
  for (int i = 0; i < g.n_q; ++i) {
    for (int j = 3; j < g.n_p - 3; ++j) {
      const double oracle = -lambda * g.q(i) * d3(i, j);
      err = std::max(err, std::abs(q(i, j) - oracle));
      scale = std::max(scale, std::abs(oracle));
    }
  }
  CHECK(err / scale < 1e-5);
}

TEST_CASE("fifth-order term of a sextic potential") {
  // V = c q^6: Q = -V'''/24 d^3 + V^(5)/1920 d^5; checked on e^{-q^2-p^2}.
  const double c = 0.01;
  const Potential v({0.0, 0.0, 0.0, 0.0, 0.0, 0.0, c});
  const GridSpec g = make_reduced_grid();
  const PhaseField w = PhaseField::sample(g, [](double q, double p) { return std::exp(-q * q - p * p); });
  const PhaseField q = moyal_residual(w, v);
  double err = 0.0;
  for (int i = 0; i < g.n_q; ++i) {
    for (int j = 0; j < g.n_p; ++j) {
      const double x = g.q(i), p = g.p(j);
      const double d3 = (-8 * p * p * p + 12 * p) * w(i, j);
      const double d5 = (-32 * std::pow(p, 5) + 160 * p * p * p - 120 * p) * w(i, j);
      const double expected = -120 * c * x * x * x / 24 * d3 + 720 * c * x / 1920 * d5;
      err = std::max(err, std::abs(q(i, j) - expected));
    }
  }
  CHECK(err < 1e-10);
}

TEST_CASE("harmonic residual vanishes identically") {
  const GridSpec g = make_reduced_grid();
  const PhaseField w = wigner_from_wavefunction(init_superposition_02(g), g);
  CHECK(max_abs(moyal_residual(w, Potential::harmonic())) == 0.0);
  const ResidualDiagnostics d = residual_diagnostics(w, Potential::harmonic());
  CHECK(d.chi_q == 0.0);
  CHECK(d.activity == 0.0);
  REQUIRE(d.epsilon_q.has_value());
  CHECK(*d.epsilon_q == 0.0);
}

TEST_CASE("residual structure: linear in lambda, zero mean, odd in p") {
  const GridSpec g = make_balanced_grid();
  const PhaseField w = wigner_from_wavefunction(init_superposition_02(g), g);
  const PhaseField q1 = moyal_residual(w, Potential::quartic(1.0));
  for (double lambda : {0.01, 0.02, 0.05, 0.3}) {
    const PhaseField ql = moyal_residual(w, Potential::quartic(lambda));
    CHECK(max_abs(ql - lambda * q1) <= 1e-12 * lambda * max_abs(q1));
    CHECK(std::abs(integrate(ql)) < 1e-14);
  }
  double odd = 0.0;
  for (int j = 1; j < g.n_p; ++j) {
    odd = std::max(odd, (q1.values.col(j) + q1.values.col(g.n_p - j)).cwiseAbs().maxCoeff());
  }
  CHECK(odd <= 1e-12 * max_abs(q1));
}

TEST_CASE("residual diagnostics for the quartic superposition") {
  const GridSpec g = make_reduced_grid();
  const PhaseField w = wigner_from_wavefunction(init_superposition_02(g), g);
  const ResidualDiagnostics d = residual_diagnostics(w, Potential::quartic(0.02));
  CHECK(d.chi_q > 0.0);
  CHECK(d.chi_q < 1.0);
  REQUIRE(d.epsilon_q.has_value());
  CHECK(d.chi_q == doctest::Approx(*d.epsilon_q / (1.0 + *d.epsilon_q)).epsilon(1e-12));
  CHECK(d.source_mass == doctest::Approx(d.sink_mass).epsilon(1e-10));
  CHECK(d.activity == doctest::Approx(d.source_mass + d.sink_mass).epsilon(1e-14));
}

TEST_CASE("undefined relative strength when the classical term vanishes") {
  const ResidualDiagnostics d = residual_diagnostics(PhaseField(make_oracle_grid()), Potential::quartic(0.1));
  CHECK(d.chi_q == 0.0);
  CHECK_FALSE(d.epsilon_q.has_value());
}

TEST_CASE("Hahn-Jordan split on randomized fields") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  const GridSpec g = make_grid(16, 0.5, 24, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    const PhaseField k = random_field(rng, g);
    const SignedSplit s = hahn_jordan_split(k);
    REQUIRE(s.positive_part.values.minCoeff() >= 0.0);
    REQUIRE(s.negative_part.values.minCoeff() >= 0.0);
    REQUIRE(s.positive_part.values.cwiseProduct(s.negative_part.values).isZero(0.0));
    REQUIRE((s.reconstruct().values - k.values).isZero(0.0));
    CHECK(std::abs(s.activity() - l1_norm(k)) <= 1e-12 * l1_norm(k));

    const MinimalityResult exact = minimality_check(k, s.positive_part, s.negative_part);
    CHECK(exact.holds);
    CHECK(std::abs(exact.excess) <= 1e-12);

    PhaseField pad(g);
    for (int i = 0; i < g.n_q; ++i)
      for (int j = 0; j < g.n_p; ++j) pad(i, j) = u(rng);
    const MinimalityResult padded =
        minimality_check(k, s.positive_part + pad, s.negative_part + pad);
    CHECK(padded.holds);
    CHECK(std::abs(padded.excess - 2.0 * integrate(pad)) <= 1e-10);
  }
}

TEST_CASE("minimality check rejects invalid decompositions") {
  const GridSpec g = make_oracle_grid();
  PhaseField k(g);
  k(3, 4) = 1.0;
  PhaseField neg(g);
  neg(0, 0) = -1.0;
  CHECK_THROWS_AS(minimality_check(k, k, neg), Error);
  CHECK_THROWS_AS(minimality_check(k, PhaseField(g), PhaseField(g)), Error);
}

TEST_CASE("split is generic in the scalar type") {
  const GridSpec g = make_oracle_grid();
  PhaseFieldT<float> k(g);
  k(1, 1) = 2.0f;
  k(2, 2) = -3.0f;
  const SignedSplitT<float> s = hahn_jordan_split(k);
  CHECK(s.source_mass() == doctest::Approx(2.0 * g.cell_area()));
  CHECK(s.sink_mass() == doctest::Approx(3.0 * g.cell_area()));
}
