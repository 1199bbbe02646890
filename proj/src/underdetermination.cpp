#include "wigner/underdetermination.hpp"

#include <cmath>

#include "wigner/spectral.hpp"

namespace wigner {

DiffusionField DiffusionField::isotropic(const GridSpec& g, double d) {
  PhaseField diag(g, PhaseField::Matrix::Constant(g.n_q, g.n_p, d));
  return {diag, PhaseField(g), diag};
}

DiffusionField DiffusionField::zero(const GridSpec& g) {
  return {PhaseField(g), PhaseField(g), PhaseField(g)};
}

PhaseField divergence(const CurrentPair& j) {
  return derivative_q(j.q, 1) + derivative_p(j.p, 1);
}

CurrentPair null_current_perturbation(const CurrentPair& j, const PhaseField& c) {
  return {j.q + derivative_p(c, 1), j.p - derivative_q(c, 1)};
}

Eigen::VectorXd marginal_current(const PhaseField& j_q) {
  return j_q.values.rowwise().sum() * j_q.grid.dp;
}

namespace {

PhaseField times(const PhaseField& a, const PhaseField& b) {
  return PhaseField(a.grid, a.values.cwiseProduct(b.values));
}

// 1/2 d_j (D_ij P) for i = q, p.
CurrentPair half_diffusive_flux(const DiffusionField& d, const PhaseField& density) {
  const PhaseField dqq = times(d.qq, density);
  const PhaseField dqp = times(d.qp, density);
  const PhaseField dpp = times(d.pp, density);
  PhaseField fq = derivative_q(dqq, 1) + derivative_p(dqp, 1);
  PhaseField fp = derivative_q(dqp, 1) + derivative_p(dpp, 1);
  fq.values *= 0.5;
  fp.values *= 0.5;
  return {std::move(fq), std::move(fp)};
}

}  // namespace

CurrentPair current_from_drift(const CurrentPair& drift, const DiffusionField& diffusion,
                               const PhaseField& density) {
  const CurrentPair flux = half_diffusive_flux(diffusion, density);
  return {times(drift.q, density) - flux.q, times(drift.p, density) - flux.p};
}

CurrentPair drift_from_current(const CurrentPair& current, const DiffusionField& diffusion,
                               const PhaseField& density, const CurrentPair& fallback,
                               double floor) {
  const CurrentPair flux = half_diffusive_flux(diffusion, density);
  CurrentPair a = fallback;
  const GridSpec& g = density.grid;
  for (int i = 0; i < g.n_q; ++i) {
    for (int j = 0; j < g.n_p; ++j) {
      const double rho = density.values(i, j);
      if (rho < floor) continue;
      a.q.values(i, j) = (current.q.values(i, j) + flux.q.values(i, j)) / rho;
      a.p.values(i, j) = (current.p.values(i, j) + flux.p.values(i, j)) / rho;
    }
  }
  return a;
}

FokkerPlanckResult fokker_planck_evolve(const PhaseField& p0, const DriftProvider& drift,
                                        const DiffusionField& diffusion, double dt, int steps,
                                        int sample_every) {
  const GridSpec& g = p0.grid;
  if (!(dt >= 0.0) || steps < 0 || sample_every < 1) {
    throw Error("fokker_planck_evolve: invalid step parameters");
  }
  if (diffusion.qq.values.minCoeff() < 0.0 || diffusion.pp.values.minCoeff() < 0.0 ||
      (diffusion.qq.values.cwiseProduct(diffusion.pp.values) -
       diffusion.qp.values.cwiseAbs2()).minCoeff() < -1e-14) {
    throw Error("fokker_planck_evolve: diffusion matrix is not positive semidefinite");
  }

  auto rhs_with = [&](const PhaseField& p, const CurrentPair& a) {
    return -divergence(current_from_drift(a, diffusion, p));
  };
  auto rhs = [&](const PhaseField& p) { return rhs_with(p, drift(p)); };

  // Explicit stability: largest spectral rate of the linearized operator.
  const double kq = std::numbers::pi / g.dq;
  const double kp = std::numbers::pi / g.dp;
  auto stability_rate = [&](const CurrentPair& a) {
    return 0.5 * diffusion.qq.values.maxCoeff() * kq * kq +
           0.5 * diffusion.pp.values.maxCoeff() * kp * kp +
           diffusion.qp.values.cwiseAbs().maxCoeff() * kq * kp +
           a.q.values.cwiseAbs().maxCoeff() * kq + a.p.values.cwiseAbs().maxCoeff() * kp;
  };
  constexpr double kStabilityLimit = 2.5;  // RK4 region along both real and imaginary axes

  FokkerPlanckResult out;
  const double mass0 = integrate(p0);
  PhaseField p = p0;
  out.min_value = p.values.minCoeff();
  auto record = [&](int step) {
    out.times.push_back(step * dt);
    out.mass_drift.push_back(std::abs(integrate(p) - mass0));
    const double mn = p.values.minCoeff();
    out.min_value = std::min(out.min_value, mn);
    if (mn < -1e-8) out.positivity_warning = true;
    out.snapshots.push_back(p);
  };
  record(0);
  for (int step = 1; step <= steps; ++step) {
    const CurrentPair a = drift(p);
    if (dt * stability_rate(a) > kStabilityLimit) {
      throw Error("fokker_planck_evolve: time step violates the explicit stability limit");
    }
    const PhaseField k1 = rhs_with(p, a);
    const PhaseField k2 = rhs(p + (0.5 * dt) * k1);
    const PhaseField k3 = rhs(p + (0.5 * dt) * k2);
    const PhaseField k4 = rhs(p + dt * k3);
    p.values += dt / 6.0 * (k1.values + 2.0 * k2.values + 2.0 * k3.values + k4.values);
    if (step % sample_every == 0) record(step);
  }
  return out;
}

FokkerPlanckResult fokker_planck_evolve(const PhaseField& p0, const CurrentPair& drift,
                                        const DiffusionField& diffusion, double dt, int steps,
                                        int sample_every) {
  return fokker_planck_evolve(
      p0, [&drift](const PhaseField&) { return drift; }, diffusion, dt, steps, sample_every);
}

Eigen::MatrixXd moment_constraints(const PhaseField& density, int n) {
  if (n < 0) throw Error("moment_constraints: order must be nonnegative");
  const GridSpec& g = density.grid;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(g.n_q, n + 1);
  for (int j = 0; j < g.n_p; ++j) {
    const double p = g.p(j);
    double pk = 1.0;
    for (int k = 0; k <= n; ++k) {
      m.col(k) += pk * density.values.col(j);
      pk *= p;
    }
  }
  return m * g.dp;
}

Eigen::VectorXd orthogonal_momentum_profile(const GridSpec& g, int n, double width) {
  if (n < 0 || !(width > 0.0)) throw Error("orthogonal_momentum_profile: bad arguments");
  const Eigen::VectorXd p = g.p_axis();
  const Eigen::VectorXd w = (-0.5 * (p / width).array().square()).exp().matrix();
  // Scaled monomials keep the moment system well conditioned.
  Eigen::MatrixXd basis(g.n_p, n + 2);
  for (int k = 0; k <= n + 1; ++k) basis.col(k) = (p / width).array().pow(k).matrix();
  // Solve sum_j w_j x_j^m (x_j^{n+1} - sum_k c_k x_j^k) = 0, m = 0..n.
  const Eigen::MatrixXd low = basis.leftCols(n + 1);
  const Eigen::MatrixXd gram = low.transpose() * w.asDiagonal() * low;
  const Eigen::VectorXd rhs = low.transpose() * w.asDiagonal() * basis.col(n + 1);
  const Eigen::VectorXd c = gram.ldlt().solve(rhs);
  const Eigen::VectorXd r = basis.col(n + 1) - low * c;
  return w.cwiseProduct(r);
}

}  // namespace wigner
