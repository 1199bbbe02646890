#include "wigner/carrier.hpp"

#include <cmath>

#include "wigner/spectral.hpp"

namespace wigner {

void FlowConfig::validate() const {
  if (!(dt >= 0.0)) throw Error("FlowConfig: dt must be nonnegative");
  if (integrator_order != 1 && integrator_order != 2 && integrator_order != 4) {
    throw Error("FlowConfig: integrator order must be 1, 2 or 4");
  }
  if (interpolation_points != 4 && interpolation_points != 6 && interpolation_points != 8) {
    throw Error("FlowConfig: interpolation stencil must have 4, 6 or 8 points");
  }
}

PhasePoint flow_step(PhasePoint z, const Potential& v, double h, int order) {
  auto rhs = [&v](PhasePoint s) { return PhasePoint{s.p, -v.derivative(1, s.q)}; };
  auto axpy = [](PhasePoint a, double c, PhasePoint b) {
    return PhasePoint{a.q + c * b.q, a.p + c * b.p};
  };
  if (order != 1 && order != 2 && order != 4) throw Error("flow_step: order must be 1, 2 or 4");
  if (order == 1) return axpy(z, h, rhs(z));
  if (order == 2) {
    const PhasePoint k1 = rhs(z);
    const PhasePoint k2 = rhs(axpy(z, 0.5 * h, k1));
    return axpy(z, h, k2);
  }
  const PhasePoint k1 = rhs(z);
  const PhasePoint k2 = rhs(axpy(z, 0.5 * h, k1));
  const PhasePoint k3 = rhs(axpy(z, 0.5 * h, k2));
  const PhasePoint k4 = rhs(axpy(z, h, k3));
  return PhasePoint{z.q + h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q),
                    z.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p)};
}

PhasePoint classical_flow(PhasePoint z, const Potential& v, double t, double dt) {
  if (t == 0.0) return z;
  if (!(dt > 0.0)) throw Error("classical_flow: dt must be positive");
  const int n = static_cast<int>(std::ceil(std::abs(t) / dt - 1e-12));
  const double h = t / n;
  for (int s = 0; s < n; ++s) z = flow_step(z, v, h);
  return z;
}

double classical_energy(PhasePoint z, const Potential& v) { return 0.5 * z.p * z.p + v(z.q); }

namespace {

// Lagrange weights for nodes 0..n-1 evaluated at x (node units).
void lagrange_weights(double x, int n, double* w) {
  for (int a = 0; a < n; ++a) {
    double num = 1.0;
    double den = 1.0;
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      num *= x - b;
      den *= a - b;
    }
    w[a] = num / den;
  }
}

}  // namespace

PhaseInterpolator::PhaseInterpolator(const GridSpec& grid, int points)
    : grid_(grid), points_(points) {
  if (points != 4 && points != 6 && points != 8) {
    throw Error("PhaseInterpolator: stencil must have 4, 6 or 8 points");
  }
}

void PhaseInterpolator::prepare(const std::vector<PhasePoint>& feet) {
  const std::size_t n = feet.size();
  const int s = points_;
  base_q_.assign(n, 0);
  base_p_.assign(n, 0);
  weights_q_.assign(n * s, 0.0);
  weights_p_.assign(n * s, 0.0);
  inside_.assign(n, 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double xq = feet[idx].q / grid_.dq + grid_.n_q / 2;
    const double xp = feet[idx].p / grid_.dp + grid_.n_p / 2;
    if (!(xq >= 0.0 && xq <= grid_.n_q - 1 && xp >= 0.0 && xp <= grid_.n_p - 1)) continue;
    inside_[idx] = 1;
    const int fq = static_cast<int>(std::floor(xq));
    const int fp = static_cast<int>(std::floor(xp));
    base_q_[idx] = fq - s / 2 + 1;
    base_p_[idx] = fp - s / 2 + 1;
    lagrange_weights(xq - base_q_[idx], s, &weights_q_[idx * s]);
    lagrange_weights(xp - base_p_[idx], s, &weights_p_[idx * s]);
  }
}

PhaseField PhaseInterpolator::apply(const PhaseField& w) const {
  require_same_grid(w.grid, grid_, "PhaseInterpolator");
  const int s = points_;
  const int nq = grid_.n_q;
  const int np = grid_.n_p;
  if (inside_.size() != static_cast<std::size_t>(nq) * np) {
    throw Error("PhaseInterpolator: stencils not prepared for this grid");
  }
  PhaseField out(grid_);
  const double* src = w.values.data();
  double* dst = out.values.data();
  for (std::size_t idx = 0; idx < inside_.size(); ++idx) {
    if (!inside_[idx]) continue;
    const int bq = base_q_[idx];
    const int bp = base_p_[idx];
    const double* wq = &weights_q_[idx * s];
    const double* wp = &weights_p_[idx * s];
    const bool interior = bq >= 0 && bq + s <= nq && bp >= 0 && bp + s <= np;
    double acc = 0.0;
    for (int a = 0; a < s; ++a) {
      const int row = bq + a;
      if (!interior && (row < 0 || row >= nq)) continue;
      const double* line = src + static_cast<std::size_t>(row) * np;
      double racc = 0.0;
      if (interior) {
        for (int b = 0; b < s; ++b) racc += wp[b] * line[bp + b];
      } else {
        for (int b = 0; b < s; ++b) {
          const int col = bp + b;
          if (col >= 0 && col < np) racc += wp[b] * line[col];
        }
      }
      acc += wq[a] * racc;
    }
    dst[idx] = acc;
  }
  return out;
}

PhaseField rotate_exact_harmonic(const PhaseField& w, double t, int interpolation_points) {
  const GridSpec& g = w.grid;
  const double c = std::cos(t);
  const double s = std::sin(t);
  std::vector<PhasePoint> feet;
  feet.reserve(static_cast<std::size_t>(g.n_q) * g.n_p);
  for (int i = 0; i < g.n_q; ++i) {
    for (int j = 0; j < g.n_p; ++j) {
      const double q = g.q(i);
      const double p = g.p(j);
      feet.push_back({q * c - p * s, q * s + p * c});
    }
  }
  PhaseInterpolator interp(g, interpolation_points);
  interp.prepare(feet);
  return interp.apply(w);
}

LiouvilleStepper::LiouvilleStepper(const GridSpec& grid, const Potential& v,
                                   const FlowConfig& cfg)
    : interp_(grid, cfg.interpolation_points) {
  cfg.validate();
  identity_ = cfg.dt == 0.0;
  if (identity_) return;
  std::vector<PhasePoint> feet;
  feet.reserve(static_cast<std::size_t>(grid.n_q) * grid.n_p);
  for (int i = 0; i < grid.n_q; ++i) {
    for (int j = 0; j < grid.n_p; ++j) {
      feet.push_back(flow_step({grid.q(i), grid.p(j)}, v, -cfg.dt, cfg.integrator_order));
    }
  }
  interp_.prepare(feet);
}

PhaseField LiouvilleStepper::step(const PhaseField& w) const {
  if (identity_) return w;
  return interp_.apply(w);
}

PhaseField liouville_step(const PhaseField& w, const Potential& v, double dt,
                          const FlowConfig& cfg) {
  FlowConfig c = cfg;
  c.dt = dt;
  return LiouvilleStepper(w.grid, v, c).step(w);
}

PhaseField apply_classical_generator(const PhaseField& w, const Potential& v) {
  const GridSpec& g = w.grid;
  const PhaseField dq = derivative_q(w, 1);
  const PhaseField dp = derivative_p(w, 1);
  PhaseField out(g);
  for (int i = 0; i < g.n_q; ++i) {
    const double force_grad = v.derivative(1, g.q(i));
    for (int j = 0; j < g.n_p; ++j) {
      out.values(i, j) = -g.p(j) * dq.values(i, j) + force_grad * dp.values(i, j);
    }
  }
  return out;
}

}  // namespace wigner
