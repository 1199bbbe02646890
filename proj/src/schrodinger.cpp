#include "wigner/schrodinger.hpp"

#include <cmath>
#include <numbers>

#include "wigner/spectral.hpp"

namespace wigner {

void TdseConfig::validate() const {
  if (!(dt > 0.0)) throw Error("TdseConfig: dt must be positive");
  if (!(t_final > 0.0)) throw Error("TdseConfig: t_final must be positive");
  if (n_samples < 2) throw Error("TdseConfig: need at least two samples");
  if (splitting_order != 2 && splitting_order != 4 && splitting_order != 6) {
    throw Error("TdseConfig: splitting order must be 2, 4 or 6");
  }
}

StepSchedule make_schedule(const TdseConfig& cfg) {
  cfg.validate();
  const int intervals = cfg.n_samples - 1;
  const double per_interval = cfg.t_final / intervals;
  StepSchedule s;
  s.steps_per_sample = std::max(1, static_cast<int>(std::ceil(per_interval / cfg.dt - 1e-9)));
  s.n_steps = s.steps_per_sample * intervals;
  s.dt = cfg.t_final / s.n_steps;
  return s;
}

WaveField hermite_eigenstate(const GridSpec& grid, int n) {
  if (n < 0) throw Error("hermite_eigenstate: n must be nonnegative");
  WaveField psi(grid);
  const double norm0 = std::pow(std::numbers::pi, -0.25);
  for (int i = 0; i < grid.n_q; ++i) {
    const double q = grid.q(i);
    double prev = 0.0;
    double cur = norm0 * std::exp(-0.5 * q * q);
    for (int m = 1; m <= n; ++m) {
      const double next = std::sqrt(2.0 / m) * q * cur - std::sqrt((m - 1.0) / m) * prev;
      prev = cur;
      cur = next;
    }
    psi.values(i) = cur;
  }
  if (boundary_mass(psi, 4) > 1e-12) {
    throw Error("hermite_eigenstate: state not resolved on the grid");
  }
  return psi;
}

WaveField init_superposition_02(const GridSpec& grid) {
  const WaveField a = hermite_eigenstate(grid, 0);
  const WaveField b = hermite_eigenstate(grid, 2);
  return WaveField(grid, (a.values + b.values) / std::sqrt(2.0));
}

double boundary_mass(const WaveField& psi, int cells) {
  const int n = psi.grid.n_q;
  cells = std::min(cells, n / 2);
  const Eigen::VectorXd rho = density(psi);
  return (rho.head(cells).sum() + rho.tail(cells).sum()) * psi.grid.dq;
}

double energy_expectation(const WaveField& psi, const Potential& v) {
  const GridSpec& g = psi.grid;
  const Eigen::VectorXd k = fft_wavenumbers(g.n_q, g.dq);
  Fft1D fft(g.n_q);
  std::vector<cdouble> in(psi.values.data(), psi.values.data() + g.n_q), spec(g.n_q);
  fft.forward(in, spec);
  // Parseval: sum |psi|^2 = (1/n) sum |psi_hat|^2.
  double kinetic = 0.0;
  for (int m = 0; m < g.n_q; ++m) kinetic += 0.5 * k(m) * k(m) * std::norm(spec[m]);
  kinetic *= g.dq / g.n_q;
  double pot = 0.0;
  for (int i = 0; i < g.n_q; ++i) pot += v(g.q(i)) * std::norm(psi.values(i));
  pot *= g.dq;
  return kinetic + pot;
}

Eigen::VectorXd momentum_density(const WaveField& psi) {
  const GridSpec& g = psi.grid;
  Eigen::VectorXd out(g.n_p);
  const double pref = g.dq / std::sqrt(2.0 * std::numbers::pi);
  for (int j = 0; j < g.n_p; ++j) {
    const double p = g.p(j);
    cdouble acc = 0.0;
    for (int i = 0; i < g.n_q; ++i) acc += std::polar(1.0, -p * g.q(i)) * psi.values(i);
    out(j) = std::norm(pref * acc);
  }
  return out;
}

namespace {

std::vector<double> composition_weights(int order) {
  if (order == 2) return {1.0};
  if (order == 4) {
    const double c = std::cbrt(2.0);
    const double x1 = 1.0 / (2.0 - c);
    const double x0 = -c * x1;
    return {x1, x0, x1};
  }
  // Yoshida's sixth-order solution A.
  const double w1 = -1.17767998417887;
  const double w2 = 0.235573213359357;
  const double w3 = 0.784513610477560;
  const double w0 = 1.0 - 2.0 * (w1 + w2 + w3);
  return {w3, w2, w1, w0, w1, w2, w3};
}

}  // namespace

SplitOperatorPropagator::SplitOperatorPropagator(const GridSpec& grid, const Potential& v,
                                                 double dt, int order)
    : grid_(grid), dt_(dt), fft_(grid.n_q) {
  potential_.resize(grid.n_q);
  for (int i = 0; i < grid.n_q; ++i) potential_(i) = v(grid.q(i));
  const Eigen::VectorXd k = fft_wavenumbers(grid.n_q, grid.dq);
  kinetic_ = 0.5 * k.cwiseAbs2();
  weights_ = composition_weights(order);
}

void SplitOperatorPropagator::strang(Eigen::VectorXcd& psi, double h) const {
  const int n = grid_.n_q;
  for (int i = 0; i < n; ++i) psi(i) *= std::polar(1.0, -0.5 * h * potential_(i));
  std::vector<cdouble> buf(psi.data(), psi.data() + n), spec(n);
  fft_.forward(buf, spec);
  for (int m = 0; m < n; ++m) spec[m] *= std::polar(1.0, -h * kinetic_(m));
  fft_.inverse(spec, buf);
  for (int i = 0; i < n; ++i) psi(i) = buf[i] * std::polar(1.0, -0.5 * h * potential_(i));
}

void SplitOperatorPropagator::step(Eigen::VectorXcd& psi) const {
  for (double w : weights_) strang(psi, w * dt_);
}

TdseResult evolve_tdse(const WaveField& psi0, const Potential& v, const TdseConfig& cfg) {
  TdseResult out;
  out.schedule = make_schedule(cfg);
  const StepSchedule& s = out.schedule;
  const SplitOperatorPropagator prop(psi0.grid, v, s.dt, cfg.splitting_order);
  const double norm0 = std::sqrt(norm_squared(psi0));

  Eigen::VectorXcd psi = psi0.values;
  auto record = [&](int step) {
    WaveField snap(psi0.grid, psi);
    out.times.push_back(s.time_of_step(step));
    out.norm_drift.push_back(std::abs(std::sqrt(norm_squared(snap)) - norm0));
    const double bm = boundary_mass(snap, cfg.boundary_cells);
    out.boundary_mass.push_back(bm);
    if (bm > cfg.boundary_threshold) out.boundary_flag = true;
    out.snapshots.push_back(std::move(snap));
  };
  record(0);
  for (int step = 1; step <= s.n_steps; ++step) {
    prop.step(psi);
    if (step % s.steps_per_sample == 0) record(step);
  }
  return out;
}

}  // namespace wigner
