#include "wigner/signed_paths.hpp"

#include <cmath>

namespace wigner {

namespace {

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

}  // namespace

void PathEnsemble::validate() const {
  const Eigen::Index n = size();
  if (n == 0) throw Error("PathEnsemble: empty ensemble");
  if (prob_reverse.size() != n || weight_forward.size() != n || weight_reverse.size() != n) {
    throw Error("PathEnsemble: component lengths differ");
  }
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != n) {
    throw Error("PathEnsemble: label count differs from path count");
  }
  if (prob_forward.minCoeff() <= 0.0 || prob_reverse.minCoeff() <= 0.0) {
    throw Error("PathEnsemble: probabilities must be strictly positive");
  }
  if (std::abs(prob_forward.sum() - 1.0) > 1e-12 || std::abs(prob_reverse.sum() - 1.0) > 1e-12) {
    throw Error("PathEnsemble: probabilities must sum to one");
  }
}

double PathEnsemble::max_abs_weight() const {
  return std::max(weight_forward.cwiseAbs().maxCoeff(), weight_reverse.cwiseAbs().maxCoeff());
}

double default_weight_floor(const PathEnsemble& e) { return 1e-12 * e.max_abs_weight(); }

RatioDecomposition ratio_decomposition(const PathEnsemble& e, double weight_floor) {
  e.validate();
  if (!(weight_floor >= 0.0)) throw Error("ratio_decomposition: weight floor must be >= 0");
  const Eigen::Index n = e.size();
  RatioDecomposition d;
  d.a_mag = Eigen::VectorXd::Zero(n);
  d.a_cl = Eigen::VectorXd::Zero(n);
  d.a_w = Eigen::VectorXd::Zero(n);
  d.a_sign = Eigen::VectorXi::Zero(n);
  d.included.assign(n, false);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double wf = e.weight_forward(k);
    const double wr = e.weight_reverse(k);
    if (std::abs(wf) <= weight_floor || std::abs(wr) <= weight_floor) continue;
    d.included[k] = true;
    ++d.included_count;
    d.a_cl(k) = std::log(e.prob_forward(k) / e.prob_reverse(k));
    d.a_w(k) = std::log(std::abs(wf) / std::abs(wr));
    d.a_mag(k) = d.a_cl(k) + d.a_w(k);
    d.a_sign(k) = sign_of(wf) * sign_of(wr);
  }
  if (d.included_count == 0) throw Error("ratio_decomposition: empty common support");
  return d;
}

IntegralIdentity integral_identity_check(const PathEnsemble& e, double weight_floor) {
  const RatioDecomposition d = ratio_decomposition(e, weight_floor);
  IntegralIdentity r;
  double forward_signed = 0.0;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const double mu_f = e.weight_forward(k) * e.prob_forward(k);
    const double mu_r = e.weight_reverse(k) * e.prob_reverse(k);
    if (!d.included[k]) {
      r.excluded_forward_mass += std::abs(mu_f);
      r.excluded_reverse_mass += std::abs(mu_r);
      continue;
    }
    r.lhs += d.a_sign(k) * std::exp(-d.a_mag(k)) * mu_f;
    r.rhs += mu_r;
    forward_signed += mu_f;
  }
  r.residual = std::abs(r.lhs - r.rhs);
  if (forward_signed != 0.0) r.normalized_ratio = r.lhs / forward_signed;
  return r;
}

PhaseField theta_reflect(const PhaseField& w) {
  const GridSpec& g = w.grid;
  if (g.n_p % 2 != 0 || std::abs(g.p(0) + g.p_max) > 1e-12 * g.p_max) {
    throw Error("theta_reflect: momentum grid is not symmetric about zero");
  }
  PhaseField out(g);
  for (int j = 0; j < g.n_p; ++j) out.values.col(j) = w.values.col((g.n_p - j) % g.n_p);
  return out;
}

PhaseField default_envelope(const PhaseField& w, double eps) {
  PhaseField env(w.grid, w.values.cwiseAbs().array() + eps * max_abs(w));
  env.values /= integrate(env);
  return env;
}

PathEnsemble ensemble_from_wigner_fields(const PhaseField& w_fwd, const PhaseField& w_rev,
                                         const PhaseField& envelope) {
  require_same_grid(w_fwd.grid, w_rev.grid, "ensemble_from_wigner_fields");
  require_same_grid(w_fwd.grid, envelope.grid, "ensemble_from_wigner_fields");
  if (envelope.values.minCoeff() <= 0.0) {
    throw Error("ensemble_from_wigner_fields: envelope must be strictly positive");
  }
  const GridSpec& g = w_fwd.grid;
  const Eigen::Index n = static_cast<Eigen::Index>(g.n_q) * g.n_p;
  PathEnsemble e;
  e.prob_forward.resize(n);
  e.weight_forward.resize(n);
  e.weight_reverse.resize(n);
  e.labels.reserve(n);
  const double area = g.cell_area();
  Eigen::Index k = 0;
  for (int i = 0; i < g.n_q; ++i) {
    for (int j = 0; j < g.n_p; ++j, ++k) {
      const double env = envelope.values(i, j);
      e.prob_forward(k) = env * area;
      e.weight_forward(k) = w_fwd.values(i, j) / env;
      e.weight_reverse(k) = w_rev.values(i, j) / env;
      e.labels.push_back({g.q(i), g.p(j)});
    }
  }
  // The envelope is normalized up to rounding; renormalize the discrete law.
  e.prob_forward /= e.prob_forward.sum();
  e.prob_reverse = e.prob_forward;
  return e;
}

ParityStats interference_parity_stats(const RatioDecomposition& d, const PathEnsemble& e) {
  if (d.included_count == 0) throw Error("interference_parity_stats: empty support");
  double neg_count = 0.0;
  double neg_mass = 0.0;
  double total_mass = 0.0;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    if (!d.included[k]) continue;
    const double mass = std::abs(e.weight_forward(k)) * e.prob_forward(k);
    total_mass += mass;
    if (d.a_sign(k) < 0) {
      neg_count += 1.0;
      neg_mass += mass;
    }
  }
  ParityStats s;
  s.by_count = neg_count / static_cast<double>(d.included_count);
  s.by_mass = total_mass > 0.0 ? neg_mass / total_mass : 0.0;
  return s;
}

}  // namespace wigner
