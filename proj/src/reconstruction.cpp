#include "wigner/reconstruction.hpp"

#include <cmath>

#include "wigner/spectral.hpp"
#include "wigner/wigner_transform.hpp"

namespace wigner {

Splitting parse_splitting(const std::string& s) {
  if (s == "lie") return Splitting::kLie;
  if (s == "strang") return Splitting::kStrang;
  throw Error("unknown splitting '" + s + "' (expected lie or strang)");
}

ResidualScheme parse_residual_scheme(const std::string& s) {
  if (s == "exp" || s == "exponential") return ResidualScheme::kExponential;
  if (s == "rk4") return ResidualScheme::kRk4;
  throw Error("unknown residual scheme '" + s + "' (expected exp or rk4)");
}

std::string to_string(Splitting s) { return s == Splitting::kLie ? "lie" : "strang"; }

std::string to_string(ResidualScheme s) {
  return s == ResidualScheme::kExponential ? "exp" : "rk4";
}

ResidualStepper::ResidualStepper(const GridSpec& grid, const Potential& v, double dt,
                                 ResidualScheme scheme)
    : grid_(grid) {
  trivial_ = v.degree() < 3 || dt == 0.0;
  if (trivial_) return;
  factors_.resize(grid.n_q, grid.n_p);
  std::vector<Eigen::VectorXcd> rows(grid.n_q);
  double max_rate = 0.0;
  for (int i = 0; i < grid.n_q; ++i) {
    rows[i] = residual_multiplier(grid, v, grid.q(i));
    max_rate = std::max(max_rate, rows[i].cwiseAbs().maxCoeff());
  }
  if (scheme == ResidualScheme::kRk4) {
    // RK4 is stable on the imaginary axis up to |z| = 2 sqrt(2).
    substeps_ = std::max(1, static_cast<int>(std::ceil(std::abs(dt) * max_rate / 2.5)));
  }
  const double h = dt / substeps_;
  for (int i = 0; i < grid.n_q; ++i) {
    for (int j = 0; j < grid.n_p; ++j) {
      const cdouble z = h * rows[i](j);
      if (scheme == ResidualScheme::kExponential) {
        factors_(i, j) = std::exp(z);
      } else {
        const cdouble r = 1.0 + z * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0)));
        factors_(i, j) = std::pow(r, substeps_);
      }
    }
  }
}

PhaseField ResidualStepper::step(const PhaseField& w) const {
  if (trivial_) return w;
  require_same_grid(w.grid, grid_, "ResidualStepper");
  return apply_p_multiplier(w, [this](int i) -> Eigen::VectorXcd { return factors_.row(i); });
}

namespace {

struct Stepper {
  LiouvilleStepper carrier;
  ResidualStepper residual;
  ResidualStepper half_residual;
  Splitting splitting;
  bool with_residual;

  PhaseField step(const PhaseField& w) const {
    if (!with_residual) return carrier.step(w);
    if (splitting == Splitting::kLie) return residual.step(carrier.step(w));
    return half_residual.step(carrier.step(half_residual.step(w)));
  }
};

EvolutionResult run(const PhaseField& w0, const Potential& v, const EvolutionConfig& cfg,
                    bool with_residual) {
  EvolutionResult out;
  out.schedule = make_schedule(cfg.time);
  const StepSchedule& s = out.schedule;
  FlowConfig flow;
  flow.dt = s.dt;
  flow.interpolation_points = cfg.interpolation_points;
  flow.integrator_order = cfg.integrator_order;
  const Stepper stepper{
      LiouvilleStepper(w0.grid, v, flow),
      ResidualStepper(w0.grid, v, s.dt, cfg.residual_scheme),
      ResidualStepper(w0.grid, v, 0.5 * s.dt, cfg.residual_scheme),
      cfg.splitting,
      with_residual,
  };
  const double limit = cfg.instability_factor * max_abs(w0);

  PhaseField w = w0;
  out.times.push_back(0.0);
  out.snapshots.push_back(w);
  for (int step = 1; step <= s.n_steps; ++step) {
    w = stepper.step(w);
    const double peak = max_abs(w);
    if (!std::isfinite(peak) || peak > limit) {
      throw Error("evolution unstable at step " + std::to_string(step) +
                  ": max|W| = " + std::to_string(peak));
    }
    if (step % s.steps_per_sample == 0) {
      out.times.push_back(s.time_of_step(step));
      out.snapshots.push_back(w);
    }
  }
  return out;
}

}  // namespace

EvolutionResult evolve_classical_only(const PhaseField& w0, const Potential& v,
                                      const EvolutionConfig& cfg) {
  return run(w0, v, cfg, false);
}

EvolutionResult evolve_with_residual(const PhaseField& w0, const Potential& v,
                                     const EvolutionConfig& cfg) {
  return run(w0, v, cfg, true);
}

L2Error l2_error(const PhaseField& w, const PhaseField& w_ref) {
  require_same_grid(w.grid, w_ref.grid, "l2_error");
  L2Error e;
  e.absolute = l2_norm(w - w_ref);
  const double ref = l2_norm(w_ref);
  e.relative = ref > 0.0 ? e.absolute / ref : 0.0;
  return e;
}

WeylMoments weyl_moments(const PhaseField& w, const Potential& v) {
  const GridSpec& g = w.grid;
  WeylMoments m;
  for (int i = 0; i < g.n_q; ++i) {
    const double q = g.q(i);
    const double vq = v(q);
    for (int j = 0; j < g.n_p; ++j) {
      const double p = g.p(j);
      const double x = w.values(i, j);
      m.q += x * q;
      m.p += x * p;
      m.q2 += x * q * q;
      m.p2 += x * p * p;
      m.energy += x * (0.5 * p * p + vq);
    }
  }
  const double a = g.cell_area();
  m.q *= a;
  m.p *= a;
  m.q2 *= a;
  m.p2 *= a;
  m.energy *= a;
  return m;
}

double boundary_leakage(const PhaseField& w, int cells) {
  const GridSpec& g = w.grid;
  const int cq = std::min(cells, g.n_q / 2);
  const int cp = std::min(cells, g.n_p / 2);
  double acc = 0.0;
  for (int i = 0; i < g.n_q; ++i) {
    const bool edge_row = i < cq || i >= g.n_q - cq;
    for (int j = 0; j < g.n_p; ++j) {
      if (edge_row || j < cp || j >= g.n_p - cp) acc += std::abs(w.values(i, j));
    }
  }
  return acc * g.cell_area();
}

DiagnosticsRecord compute_diagnostics(const PhaseField& w, const PhaseField& w_ref,
                                      const Potential& v, double t, int boundary_cells) {
  require_same_grid(w.grid, w_ref.grid, "compute_diagnostics");
  DiagnosticsRecord d;
  d.time = t;
  const double mass = integrate(w);
  d.wigner_norm_error = std::abs(mass - 1.0);
  const Marginals m = marginals(w);
  const Marginals mr = marginals(w_ref);
  d.marginal_error_q = (m.position - mr.position).cwiseAbs().maxCoeff();
  d.marginal_error_p = (m.momentum - mr.momentum).cwiseAbs().maxCoeff();
  const L2Error e = l2_error(w, w_ref);
  d.l2_error_absolute = e.absolute;
  d.l2_error_relative = e.relative;
  d.total_variation = l1_norm(w);
  d.sign_cancellation_ratio = mass != 0.0 ? d.total_variation / std::abs(mass) : 0.0;
  d.negativity_mass = (-w.values).cwiseMax(0.0).sum() * w.grid.cell_area();
  const ResidualDiagnostics r = residual_diagnostics(w, v);
  d.residual_activity = r.activity;
  d.source_mass = r.source_mass;
  d.sink_mass = r.sink_mass;
  d.chi_q = r.chi_q;
  d.boundary_leakage = boundary_leakage(w, boundary_cells);
  d.moments = weyl_moments(w, v);
  return d;
}

}  // namespace wigner
