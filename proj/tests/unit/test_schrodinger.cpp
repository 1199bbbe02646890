#include <doctest.h>

#include <complex>

#include "wigner/schrodinger.hpp"

using namespace wigner;

namespace {

// Closed-form oscillator states, written out independently of the recurrence.
double phi0(double q) { return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * q * q); }
double phi2(double q) { return phi0(q) * (2 * q * q - 1) / std::sqrt(2.0); }

// Exact harmonic evolution of (|0> + |2>)/sqrt2: E_n = n + 1/2.
std::complex<double> psi_exact(double q, double t) {
  const std::complex<double> i(0.0, 1.0);
  return (std::exp(-0.5 * i * t) * phi0(q) + std::exp(-2.5 * i * t) * phi2(q)) / std::sqrt(2.0);
}

}  // namespace

TEST_CASE("eigenstates match closed forms and are orthonormal") {
  const GridSpec g = make_balanced_grid();
  const WaveField s0 = hermite_eigenstate(g, 0);
  const WaveField s2 = hermite_eigenstate(g, 2);
  const WaveField s1 = hermite_eigenstate(g, 1);
  for (int i = 0; i < g.n_q; ++i) {
    REQUIRE(std::abs(s0.values(i) - phi0(g.q(i))) < 1e-15);
    REQUIRE(std::abs(s2.values(i) - phi2(g.q(i))) < 1e-14);
  }
  CHECK(norm_squared(s0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(norm_squared(s2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(s0.values.dot(s2.values) * g.dq) < 1e-14);
  CHECK(std::abs(s1.values.dot(s2.values) * g.dq) < 1e-14);
}

TEST_CASE("superposition initial state") {
  const GridSpec g = make_balanced_grid();
  const WaveField psi = init_superposition_02(g);
  CHECK(norm_squared(psi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(energy_expectation(psi, Potential::harmonic()) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(boundary_mass(psi, 4) < 1e-13);
}

TEST_CASE("unresolved eigenstates are rejected") {
  CHECK_THROWS_AS(hermite_eigenstate(make_grid(16, 0.25, 16, 0.25), 2), Error);
  CHECK_THROWS_AS(hermite_eigenstate(make_balanced_grid(), -1), Error);
}

TEST_CASE("momentum density of the ground state") {
  const GridSpec g = make_balanced_grid();
  const Eigen::VectorXd rho = momentum_density(hermite_eigenstate(g, 0));
  double err = 0.0;
  for (int j = 0; j < g.n_p; ++j) {
    const double p = g.p(j);
    err = std::max(err, std::abs(rho(j) - std::exp(-p * p) / std::sqrt(std::numbers::pi)));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("schedule divides the run into equal snapshot intervals") {
  const StepSchedule s = make_schedule(TdseConfig{});
  CHECK(s.n_steps == 320);
  CHECK(s.steps_per_sample == 5);
  CHECK(s.dt == doctest::Approx(std::numbers::pi / 640).epsilon(1e-15));
  CHECK(s.dt <= 0.005);
  TdseConfig bad;
  bad.n_samples = 1;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = TdseConfig{};
  bad.dt = 0.0;
  CHECK_THROWS_AS(make_schedule(bad), Error);
  bad = TdseConfig{};
  bad.splitting_order = 3;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("harmonic evolution reproduces the eigen-expansion") {
  const GridSpec g = make_balanced_grid();
  const TdseResult r = evolve_tdse(init_superposition_02(g), Potential::harmonic(), TdseConfig{});
  REQUIRE(r.snapshots.size() == 65);
  CHECK(r.times.back() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  double err = 0.0, dens_err = 0.0;
  for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
    for (int i = 0; i < g.n_q; ++i) {
      const std::complex<double> ex = psi_exact(g.q(i), r.times[k]);
      err = std::max(err, std::abs(r.snapshots[k].values(i) - ex));
      dens_err = std::max(dens_err, std::abs(std::norm(r.snapshots[k].values(i)) - std::norm(ex)));
    }
  }
  CHECK(err < 1e-10);
  CHECK(dens_err < 1e-10);
  for (double d : r.norm_drift) CHECK(d <= 1e-12);
  CHECK_FALSE(r.boundary_flag);
}

TEST_CASE("quartic evolution conserves norm and energy") {
  const GridSpec g = make_balanced_grid();
  const Potential v = Potential::quartic(0.05);
  const WaveField psi0 = init_superposition_02(g);
  const TdseResult r = evolve_tdse(psi0, v, TdseConfig{});
  const double e0 = energy_expectation(psi0, v);
  double de = 0.0;
  for (const WaveField& psi : r.snapshots) de = std::max(de, std::abs(energy_expectation(psi, v) - e0));
  CHECK(de < 1e-10);
  for (double d : r.norm_drift) CHECK(d <= 1e-12);
  for (double b : r.boundary_mass) CHECK(b < 1e-13);
}

TEST_CASE("composition orders converge at their nominal rates") {
  const GridSpec g = make_reduced_grid();
  const Potential v = Potential::quartic(0.05);
  const WaveField psi0 = init_superposition_02(g);
  auto final_state = [&](double dt, int order) {
    TdseConfig c;
    c.dt = dt;
    c.t_final = 0.5;
    c.n_samples = 2;
    c.splitting_order = order;
    return evolve_tdse(psi0, v, c).snapshots.back().values;
  };
  const Eigen::VectorXcd ref = final_state(0.0025, 6);
  const double e2a = (final_state(0.02, 2) - ref).norm();
  const double e2b = (final_state(0.01, 2) - ref).norm();
  const double e4a = (final_state(0.05, 4) - ref).norm();
  const double e4b = (final_state(0.025, 4) - ref).norm();
  CHECK(std::log2(e2a / e2b) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::log2(e4a / e4b) == doctest::Approx(4.0).epsilon(0.1));
}
